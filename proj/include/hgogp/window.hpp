#pragma once

#include <cstddef>
#include <deque>
#include <limits>

#include <Eigen/Dense>

#include "hgogp/gp.hpp"

namespace hgogp {

struct WindowSample {
    double time = 0.0;
    Eigen::VectorXd state;
    Eigen::VectorXd targets;  // observer outputs z_1..z_r at `time`
    double measurement = std::numeric_limits<double>::quiet_NaN();  // raw y at `time`, if recorded
};

// Last-N samples of (state, observer output). A new sample is stored only when
// the state has moved strictly more than the trigger distance from the most
// recently stored one; the oldest sample is dropped past capacity.
class SlidingWindow {
public:
    SlidingWindow(std::size_t capacity, double trigger_distance);

    // Returns true if the sample was stored. Throws ArgumentError if t does not
    // exceed the last stored time or the dimensions differ from earlier samples.
    bool offer(double t, const PointRef& x, const Eigen::VectorXd& z_hat,
               double measurement = std::numeric_limits<double>::quiet_NaN());

    std::size_t capacity() const noexcept { return capacity_; }
    double trigger_distance() const noexcept { return trigger_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    std::size_t accepted_count() const noexcept { return accepted_; }

    const std::deque<WindowSample>& samples() const noexcept { return samples_; }
    const Eigen::VectorXd& last_state() const;

    // Stored states as columns, oldest first.
    Eigen::MatrixXd states() const;

    // Inputs = stored states, targets = component k (0-based) of the stored observer vectors.
    Dataset as_dataset(std::size_t k, double noise_variance) const;

    // Inputs = stored states, targets = the raw measurements.
    Dataset measurement_dataset(double noise_variance) const;

private:
    std::size_t capacity_;
    double trigger_;
    std::deque<WindowSample> samples_;
    std::size_t accepted_ = 0;
};

}  // namespace hgogp
