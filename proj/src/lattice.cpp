#include "wavesel/lattice.hpp"

#include "detail/enumeration.hpp"
#include "detail/reduction.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wavesel {

namespace {

BigInt dot(const IntVector& a, const IntVector& b) {
    BigInt acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// z - k v with k = round(z.v / |v|^2); leaves Qz unchanged.
void reduce_along(IntVector& z, const IntVector& v, const BigInt& v_norm_sq) {
    const Rational ratio(dot(z, v), v_norm_sq);
    const BigInt k = (ratio + Rational(BigInt(1), BigInt(2))).floor();
    if (k == 0) return;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= k * v[i];
}

}  // namespace

// ---------------------------------------------------------------------------
// WavelengthSet

WavelengthSet::WavelengthSet(std::vector<Rational> lambdas) : lambdas_(std::move(lambdas)) {
    if (lambdas_.empty()) throw std::invalid_argument("at least one wavelength is required");
    for (const auto& l : lambdas_) {
        if (l.sign() <= 0) throw std::invalid_argument("wavelengths must be positive, got " + l.to_string());
    }
    lcm_ = rational_lcm(lambdas_);
    lcm_d_ = lcm_.to_double();
    v_.reserve(lambdas_.size());
    w_.reserve(lambdas_.size());
    v_norm_sq_ = 0;
    for (const auto& l : lambdas_) {
        const Rational vn = lcm_ / l;
        if (!vn.is_integer()) throw std::logic_error("P/lambda is not an integer");
        v_.push_back(vn.num());
        v_norm_sq_ += vn.num() * vn.num();
        w_.push_back((Rational(1) / l).to_double());
    }
    if (gcd_all(v_) != 1) throw std::logic_error("gcd(v) != 1");
}

Rational WavelengthSet::inverse_square_sum() const {
    Rational s(0);
    for (const auto& l : lambdas_) {
        const Rational w = Rational(1) / l;
        s += w * w;
    }
    return s;
}

std::string WavelengthSet::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < lambdas_.size(); ++i) {
        if (i) os << ", ";
        os << lambdas_[i];
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Unimodular completion

std::vector<IntVector> unimodular_completion(const IntVector& v) {
    const std::size_t n = v.size();
    if (n == 0) throw std::invalid_argument("empty vector");
    if (n == 1) {
        std::vector<IntVector> u(1, IntVector(1));
        if (abs(v[0]) != 1) throw std::domain_error("vector entries are not jointly coprime");
        u[0][0] = v[0];
        return u;
    }

    const IntVector tail(v.begin() + 1, v.end());
    BigInt g = 0;
    for (const auto& x : tail) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());

    if (g == 0) {
        // v = (+-1, 0, ..., 0)
        if (abs(v[0]) != 1) throw std::domain_error("vector entries are not jointly coprime");
        std::vector<IntVector> u(n, IntVector(n, 0));
        for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
        u[0][0] = v[0];
        return u;
    }

    IntVector tail_primitive(tail.size());
    for (std::size_t i = 0; i < tail.size(); ++i) mpz_divexact(tail_primitive[i].get_mpz_t(), tail[i].get_mpz_t(), g.get_mpz_t());
    const auto inner = unimodular_completion(tail_primitive);

    BigInt d, s, t;
    mpz_gcdext(d.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), v[0].get_mpz_t(), g.get_mpz_t());
    if (d != 1) throw std::domain_error("vector entries are not jointly coprime");

    // U = diag(1, inner) * M, M = [[v0, -t], [g, s]] (+) I; det M = v0 s + g t = 1.
    const IntVector& c = inner[0];
    std::vector<IntVector> cols(n, IntVector(n, 0));
    cols[0][0] = v[0];
    for (std::size_t r = 1; r < n; ++r) cols[0][r] = g * c[r - 1];
    cols[1][0] = -t;
    for (std::size_t r = 1; r < n; ++r) cols[1][r] = s * c[r - 1];
    for (std::size_t col = 2; col < n; ++col) {
        cols[col][0] = 0;
        for (std::size_t r = 1; r < n; ++r) cols[col][r] = inner[col - 1][r - 1];
    }
    return cols;
}

// ---------------------------------------------------------------------------
// LatticeContext

double LatticeContext::det_dual() const { return 1.0 / std::sqrt(to_double(v_norm_sq_)); }

Eigen::VectorXd LatticeContext::project(std::span<const double> x) const {
    const auto n = static_cast<Eigen::Index>(v_.size());
    if (x.size() != v_.size()) throw std::invalid_argument("dimension mismatch");
    double vx = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) vx += v_d_[i] * x[i];
    const double scale = vx / v_norm_sq_d_;
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = x[static_cast<std::size_t>(i)] - scale * v_d_[static_cast<std::size_t>(i)];
    return out;
}

LatticeContext LatticeContext::from_integer_vector(IntVector v, LatticeOptions options) {
    LatticeContext ctx;
    ctx.build(std::move(v), options);
    return ctx;
}

LatticeContext build_context(const WavelengthSet& ws, LatticeOptions options) {
    LatticeContext ctx;
    ctx.source_ = ws;
    ctx.build(ws.v(), options);
    return ctx;
}

void LatticeContext::build(IntVector v, LatticeOptions options) {
    if (v.empty()) throw std::invalid_argument("empty vector");
    v_ = std::move(v);
    v_norm_sq_ = dot(v_, v_);
    v_d_.clear();
    for (const auto& x : v_) v_d_.push_back(to_double(x));
    v_norm_sq_d_ = to_double(v_norm_sq_);

    unimodular_ = unimodular_completion(v_);
    const std::size_t n = v_.size();
    const std::size_t dim = n - 1;

    dual_basis_.assign(dim, RationalVector(n));
    for (std::size_t j = 0; j < dim; ++j) {
        const IntVector& col = unimodular_[j + 1];
        const Rational coeff(dot(v_, col), v_norm_sq_);
        for (std::size_t i = 0; i < n; ++i) dual_basis_[j][i] = Rational(col[i]) - coeff * Rational(v_[i]);
    }

    std::vector<IntVector> transform(dim, IntVector(dim, 0));
    if (options.reduce) {
        auto reduced = detail::lll_reduce(dual_basis_);
        reduced_basis_ = std::move(reduced.basis);
        transform = std::move(reduced.transform);
    } else {
        reduced_basis_ = dual_basis_;
        for (std::size_t j = 0; j < dim; ++j) transform[j][j] = 1;
    }

    // coefficient map: columns U[:, 1:] * transform
    coeff_map_.assign(dim, IntVector(n, 0));
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t k = 0; k < dim; ++k) {
            if (transform[j][k] == 0) continue;
            for (std::size_t i = 0; i < n; ++i) coeff_map_[j][i] += unimodular_[k + 1][i] * transform[j][k];
        }
    }

    basis_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            basis_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = reduced_basis_[j][i].to_double();
        }
    }
    if (dim > 0) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis_);
        q_ = qr.householderQ() * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
        r_ = qr.matrixQR().topRows(static_cast<Eigen::Index>(dim)).triangularView<Eigen::Upper>();
    } else {
        q_.resize(static_cast<Eigen::Index>(n), 0);
        r_.resize(0, 0);
    }
}

// ---------------------------------------------------------------------------
// Decoding

ClosestPoint closest_point(const LatticeContext& ctx, std::span<const double> target) {
    const std::size_t n = ctx.ambient_dimension();
    if (target.size() != n) throw std::invalid_argument("target has wrong length");
    for (double x : target) {
        if (!std::isfinite(x)) throw std::invalid_argument("target must be finite");
    }
    ClosestPoint out;
    out.z.assign(n, 0);
    const Eigen::VectorXd t = ctx.project(target);
    if (ctx.dimension() == 0) {
        out.distance_sq = t.squaredNorm();
        return out;
    }

    const Eigen::VectorXd coords = ctx.q_factor().transpose() * t;
    const auto found = detail::enumerate_closest(ctx.r_factor(), coords);

    Eigen::VectorXd u(static_cast<Eigen::Index>(found.u.size()));
    for (std::size_t j = 0; j < found.u.size(); ++j) {
        u[static_cast<Eigen::Index>(j)] = static_cast<double>(found.u[j]);
        if (found.u[j] == 0) continue;
        const BigInt uj(static_cast<long>(found.u[j]));
        const auto& col = ctx.coefficient_map()[j];
        for (std::size_t i = 0; i < n; ++i) out.z[i] += col[i] * uj;
    }
    reduce_along(out.z, ctx.v(), ctx.v_norm_sq());
    out.distance_sq = (t - ctx.basis() * u).squaredNorm();
    return out;
}

ShortVector shortest_vector(const LatticeContext& ctx) {
    if (ctx.dimension() == 0) throw std::domain_error("zero-dimensional lattice");
    const std::size_t n = ctx.ambient_dimension();
    const auto found = detail::enumerate_shortest(ctx.r_factor());

    ShortVector out;
    out.z.assign(n, 0);
    Eigen::VectorXd u(static_cast<Eigen::Index>(found.u.size()));
    for (std::size_t j = 0; j < found.u.size(); ++j) {
        u[static_cast<Eigen::Index>(j)] = static_cast<double>(found.u[j]);
        const BigInt uj(static_cast<long>(found.u[j]));
        for (std::size_t i = 0; i < n; ++i) out.z[i] += ctx.coefficient_map()[j][i] * uj;
    }
    reduce_along(out.z, ctx.v(), ctx.v_norm_sq());
    out.vector = ctx.basis() * u;
    mpq_class norm_sq = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mpq_class coord = 0;
        for (std::size_t j = 0; j < found.u.size(); ++j) {
            coord += ctx.reduced_basis()[j][i].raw() * static_cast<long>(found.u[j]);
        }
        norm_sq += coord * coord;
    }
    out.d_min = std::sqrt(Rational(std::move(norm_sq)).to_double());
    return out;
}

}  // namespace wavesel
