#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace hpmc {

using Vec2 = Eigen::Vector2d;

/// Metric regime of the ambient structure. In euclidean mode the rotational
/// offset field X is switched off and the operators reduce to the classical
/// graph mean-curvature calculus.
enum class Mode { heisenberg, euclidean };

/// Points with |Du + X| below this threshold are treated as characteristic
/// in the limit; the horizontal normal and the second-variation density are
/// undefined there.
inline constexpr double kCharacteristicGuard = 1e-8;

struct StencilError : std::runtime_error {
  explicit StencilError(const std::string& what) : std::runtime_error(what) {}
};

struct CharacteristicPointError : std::runtime_error {
  explicit CharacteristicPointError(const std::string& what)
      : std::runtime_error(what) {}
};

struct InfeasibleDomainError : std::runtime_error {
  explicit InfeasibleDomainError(const std::string& what)
      : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hpmc
