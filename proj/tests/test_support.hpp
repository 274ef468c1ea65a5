#ifndef WEILKIT_TEST_SUPPORT_HPP
#define WEILKIT_TEST_SUPPORT_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "weilkit/geomdsl.hpp"

namespace weilkit::test {

inline constexpr std::uint64_t kSeed = 20261016;

inline std::string model_path(const std::string& stem) {
  return std::string(WEILKIT_DEFAULT_MODELS_DIR) + "/" + stem + ".vty";
}

inline VarietyModel model(const std::string& stem) { return load_variety(model_path(stem)); }

/// Brute-force |X(F_p)| using plain modular integer arithmetic. Projective
/// factors are handled through the affine cone: count tuples whose projective
/// blocks are all nonzero, then divide by (p-1)^(#projective factors). This is
/// independent of the pivot normalization and of the linear-slice planner.
inline std::uint64_t naive_count(const VarietyModel& m, std::uint64_t p) {
  const std::size_t nv = m.ambient.num_vars();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < nv; ++i) total *= p;
  std::vector<std::uint64_t> pt(nv, 0);
  std::uint64_t hits = 0;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t v = idx;
    for (std::size_t i = 0; i < nv; ++i) {
      pt[i] = v % p;
      v /= p;
    }
    bool ok = true;
    std::size_t nproj = 0;
    for (std::size_t f = 0; f < m.ambient.factors.size() && ok; ++f) {
      if (!m.ambient.factors[f].projective()) continue;
      ++nproj;
      auto [b, e] = m.ambient.range(f);
      bool nonzero = false;
      for (std::size_t i = b; i < e; ++i) nonzero = nonzero || pt[i] != 0;
      ok = nonzero;
    }
    for (const auto& eq : m.equations) {
      if (!ok) break;
      ok = eq.eval_mod(pt, p) == 0;
    }
    if (ok) ++hits;
  }
  std::size_t nproj = 0;
  for (const auto& f : m.ambient.factors) nproj += f.projective();
  for (std::size_t i = 0; i < nproj; ++i) hits /= (p - 1);
  return hits;
}

}  // namespace weilkit::test

#endif  // WEILKIT_TEST_SUPPORT_HPP
