#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace pes {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Non-finite value produced during a numeric computation.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// State became non-finite during integration.
class BlowUpError : public NumericError {
public:
    BlowUpError(const std::string& what, double time)
        : NumericError(what), time_(time) {}
    [[nodiscard]] double time() const { return time_; }

private:
    double time_;
};

/// Trajectory left the working domain.
class DomainExitError : public std::runtime_error {
public:
    DomainExitError(const std::string& what, double time, int coordinate)
        : std::runtime_error(what), time_(time), coordinate_(coordinate) {}
    [[nodiscard]] double time() const { return time_; }
    [[nodiscard]] int coordinate() const { return coordinate_; }

private:
    double time_;
    int coordinate_;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace pes
