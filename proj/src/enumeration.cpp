#include "detail/enumeration.hpp"

#include <cmath>
#include <limits>

namespace wavesel::detail {

namespace {

class Enumerator {
public:
    Enumerator(const Eigen::MatrixXd& r, const Eigen::VectorXd& c, bool exclude_zero)
        : r_(r), c_(c), n_(static_cast<int>(r.rows())), exclude_zero_(exclude_zero),
          u_(static_cast<std::size_t>(n_), 0), best_u_(u_) {}

    EnumResult run() {
        if (n_ > 0) search(n_ - 1, 0.0);
        return {best_u_, best_};
    }

private:
    void search(int k, double partial) {
        double s = c_[k];
        for (int j = k + 1; j < n_; ++j) s -= r_(k, j) * static_cast<double>(u_[j]);
        const double rkk = r_(k, k);
        const double center = s / rkk;
        const auto start = static_cast<std::int64_t>(std::floor(center + 0.5));
        const std::int64_t dir = center >= static_cast<double>(start) ? 1 : -1;

        // start, start+dir, start-dir, start+2dir, ... visits |center - x| in
        // nondecreasing order, so the first candidate outside the radius ends the level.
        for (std::int64_t i = 0;; ++i) {
            const std::int64_t offset = (i % 2 == 1) ? (i + 1) / 2 : -(i / 2);
            const std::int64_t x = start + dir * offset;
            const double diff = (center - static_cast<double>(x)) * rkk;
            const double d = partial + diff * diff;
            if (d >= best_) break;
            u_[k] = x;
            if (k == 0) {
                if (!(exclude_zero_ && is_zero())) {
                    best_ = d;
                    best_u_ = u_;
                }
            } else {
                search(k - 1, d);
            }
        }
        u_[k] = 0;
    }

    [[nodiscard]] bool is_zero() const {
        for (auto x : u_) {
            if (x != 0) return false;
        }
        return true;
    }

    const Eigen::MatrixXd& r_;
    const Eigen::VectorXd& c_;
    int n_;
    bool exclude_zero_;
    std::vector<std::int64_t> u_;
    std::vector<std::int64_t> best_u_;
    double best_ = std::numeric_limits<double>::infinity();
};

}  // namespace

EnumResult enumerate_closest(const Eigen::MatrixXd& r, const Eigen::VectorXd& c) {
    return Enumerator(r, c, false).run();
}

EnumResult enumerate_shortest(const Eigen::MatrixXd& r) {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(r.rows());
    return Enumerator(r, zero, true).run();
}

}  // namespace wavesel::detail
