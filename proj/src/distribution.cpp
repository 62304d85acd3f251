#include "dagreserve/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

namespace dagreserve {

namespace {

DiscreteRV canonicalize(std::vector<WeightedValue> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const WeightedValue& a, const WeightedValue& b) { return a.value < b.value; });
    DiscreteRV rv;
    for (const WeightedValue& a : atoms) {
        // Exact-equality merge keeps supports bit-for-bit reproducible.
        if (!rv.atoms.empty() && rv.atoms.back().value == a.value) {
            rv.atoms.back().probability += a.probability;
        } else {
            rv.atoms.push_back(a);
        }
    }
    return rv;
}

double workload_of(const Atom& a, int parallelism, double backlog) {
    return a.volume + (parallelism - 1) * a.length + backlog;
}

// Mass sums can drift an ulp past the ends of [0,1].
double clamp_probability(double p) { return std::min(1.0, std::max(0.0, p)); }

}  // namespace

JointDistribution from_realizations(const std::vector<DagRealization>& rs) {
    if (rs.empty()) throw std::invalid_argument("no realizations");
    double total = 0.0;
    for (const DagRealization& r : rs) total += r.probability;
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
        throw std::invalid_argument("realization probabilities do not sum to 1");
    }
    std::map<std::pair<double, double>, double> mass;
    for (const DagRealization& r : rs) {
        if (r.length > r.volume * (1.0 + 1e-12) + 1e-9) {
            throw std::invalid_argument("realization length exceeds volume");
        }
        mass[{r.volume, r.length}] += r.probability;
    }
    JointDistribution d;
    for (const auto& [key, p] : mass) d.atoms.push_back({p, key.first, key.second});
    return d;
}

double joint_cdf(const JointDistribution& d, double u, double v) {
    double p = 0.0;
    for (const Atom& a : d.atoms) {
        if (a.volume <= u && a.length <= v) p += a.probability;
    }
    return clamp_probability(p);
}

DiscreteRV workload_rv(const JointDistribution& d, int parallelism, double backlog) {
    if (parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");
    std::vector<WeightedValue> atoms;
    atoms.reserve(d.atoms.size());
    for (const Atom& a : d.atoms) {
        atoms.push_back({a.probability, workload_of(a, parallelism, backlog)});
    }
    return canonicalize(std::move(atoms));
}

DiscreteRV response_time_rv(const JointDistribution& d, const ReservationConfig& cfg,
                            double backlog) {
    require_valid(cfg);
    std::vector<WeightedValue> atoms;
    atoms.reserve(d.atoms.size());
    for (const Atom& a : d.atoms) {
        const double w = workload_of(a, cfg.parallelism, backlog);
        atoms.push_back({a.probability, w == 0.0 ? 0.0 : inverse_sbf(cfg, w)});
    }
    return canonicalize(std::move(atoms));
}

double exceedance(const DiscreteRV& rv, double threshold) {
    double p = 0.0;
    for (const WeightedValue& a : rv.atoms) {
        if (a.value > threshold) p += a.probability;
    }
    return clamp_probability(p);
}

double response_time_cdf_formula(const JointDistribution& d, const ReservationConfig& cfg,
                                 double backlog, double u) {
    require_valid(cfg);
    const double denom = cfg.parallelism * cfg.budget;
    const double gap = cfg.period - cfg.budget;

    double result = 0.0;
    double min_x = std::numeric_limits<double>::infinity();
    double max_x = 0.0;
    std::vector<std::pair<double, double>> x_atoms;  // (x, mass), x > 0
    for (const Atom& a : d.atoms) {
        const double w = workload_of(a, cfg.parallelism, backlog);
        if (w == 0.0) {
            // Zero workload completes immediately.
            if (u >= 0.0) result += a.probability;
            continue;
        }
        const double x = w / denom;
        x_atoms.emplace_back(x, a.probability);
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
    }
    if (x_atoms.empty()) return clamp_probability(result);

    // Sum joint mass over the unit cells (l, l+1] covering the support.
    // The lower bound is widened by one cell so integer-valued minima stay
    // covered.
    const long long lo = std::max(0LL, static_cast<long long>(std::floor(min_x)) - 1);
    const long long hi = static_cast<long long>(std::ceil(max_x));
    for (long long l = lo; l <= hi; ++l) {
        const double cutoff = (u - gap * (static_cast<double>(l) + 2.0)) / cfg.budget;
        for (const auto& [x, mass] : x_atoms) {
            if (x > static_cast<double>(l) && x <= static_cast<double>(l) + 1.0 && x <= cutoff) {
                result += mass;
            }
        }
    }
    return clamp_probability(result);
}

}  // namespace dagreserve
