#pragma once

#include <vector>

#include "dagreserve/dag_model.hpp"
#include "dagreserve/reservation.hpp"

namespace dagreserve {

inline constexpr double kProbabilityTolerance = 1e-9;

struct Atom {
    double probability = 0.0;
    double volume = 0.0;
    double length = 0.0;
};

/// Finite discrete distribution over (volume, length) pairs. Atoms are
/// unique per (volume, length) and sorted by (volume, length); masses sum
/// to 1 within kProbabilityTolerance.
struct JointDistribution {
    std::vector<Atom> atoms;
};

/// Builds the distribution from a realization list, merging atoms with
/// identical (volume, length). Throws std::invalid_argument on an empty
/// list or when probabilities do not sum to 1.
JointDistribution from_realizations(const std::vector<DagRealization>& rs);

/// P(volume <= u and length <= v).
double joint_cdf(const JointDistribution& d, double u, double v);

struct WeightedValue {
    double probability = 0.0;
    double value = 0.0;
};

/// Discrete random variable with strictly increasing values; equal values
/// are merged with exact floating-point comparison so supports reproduce
/// bit-for-bit.
struct DiscreteRV {
    std::vector<WeightedValue> atoms;
};

/// Maps each atom to volume + (m-1)*length + backlog.
DiscreteRV workload_rv(const JointDistribution& d, int parallelism, double backlog);

/// Response-time-bound distribution under `cfg` with a fixed backlog term:
/// inverse_sbf of the workload per atom, with zero-workload atoms mapping
/// to 0.
DiscreteRV response_time_rv(const JointDistribution& d, const ReservationConfig& cfg,
                            double backlog);

/// P(value > threshold).
double exceedance(const DiscreteRV& rv, double threshold);

/// P(response-time bound <= u) evaluated through the ceiling-partition of
/// the normalized workload X = W/(mE): sums the joint mass of
/// {l < X <= l+1, X <= (u - (P-E)(l+2))/E} over integer l. Agrees with
/// 1 - exceedance(response_time_rv(...), u) on every input.
double response_time_cdf_formula(const JointDistribution& d, const ReservationConfig& cfg,
                                 double backlog, double u);

}  // namespace dagreserve
