#pragma once

#include "wavesel/lattice.hpp"

#include <string_view>
#include <vector>

namespace wavesel::test {

inline std::vector<Rational> rationals(std::initializer_list<std::string_view> xs) {
    std::vector<Rational> out;
    for (auto x : xs) out.push_back(Rational::parse(x));
    return out;
}

// Wavelength sets used throughout the experiments.
inline WavelengthSet fixture_a() { return WavelengthSet(rationals({"2", "3", "5"})); }
inline WavelengthSet fixture_b() { return WavelengthSet(rationals({"30/13", "15/4", "5"})); }
inline WavelengthSet fixture_c() {
    return WavelengthSet(rationals({"101039/66", "1076285/682", "198036440/125389", "17572/11"}));
}
inline WavelengthSet fixture_d() {
    return WavelengthSet(rationals({"1528", "3868970284693/2500000000", "156953786407767/100000000000", "17572/11"}));
}
inline WavelengthSet fixture_e() { return WavelengthSet(rationals({"2", "3", "5", "7", "11"})); }
inline WavelengthSet fixture_f() { return WavelengthSet(rationals({"22/3", "66/17", "77/18", "110/31", "11"})); }

}  // namespace wavesel::test
