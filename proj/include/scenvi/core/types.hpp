#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace scenvi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr const char* kToolVersion = "0.3.0";

// Precondition or input-format violation; the caller handed us something malformed.
class ContractError : public std::invalid_argument {
public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical routine hit its iteration cap or lost accuracy.
class NumericalFailure : public std::runtime_error {
public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file content (CSV/JSON). Treated as a contract error by the CLI.
class ParseError : public ContractError {
public:
  explicit ParseError(const std::string& what) : ContractError(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractError(msg);
}

} // namespace scenvi
