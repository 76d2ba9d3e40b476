#include "mixlink/prob.hpp"

#include <numeric>

namespace mixlink {

ProbVector::ProbVector(Vec entries) : p_(std::move(entries)) {
    if (p_.size() < 2) throw validation_error("ProbVector needs at least 2 classes");
    double sum = 0.0;
    for (double v : p_) {
        if (!(v >= 0.0 && v <= 1.0))
            throw validation_error("ProbVector entry outside [0, 1]: " + format_double(v));
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw validation_error("ProbVector entries sum to " + format_double(sum));
}

ReducedProb::ReducedProb(Vec entries) : pt_(std::move(entries)) {
    if (pt_.empty()) throw validation_error("ReducedProb needs at least 1 entry");
    double sum = 0.0;
    for (double v : pt_) {
        if (!(v >= 0.0))
            throw validation_error("ReducedProb entry negative: " + format_double(v));
        sum += v;
    }
    if (sum > 1.0 + 1e-12)
        throw validation_error("ReducedProb entries sum to " + format_double(sum));
}

ReducedProb project(const ProbVector& p) {
    Vec head(p.entries().begin(), p.entries().end() - 1);
    return ReducedProb(std::move(head));
}

ProbVector lift(const ReducedProb& pt) {
    Vec full = pt.entries();
    double sum = std::accumulate(full.begin(), full.end(), 0.0);
    double last = 1.0 - sum;
    if (last < 0.0) last = 0.0;
    if (last > 1.0) last = 1.0;
    full.push_back(last);
    return ProbVector(std::move(full));
}

ProbVector binary_prob(double p_tilde) {
    return ProbVector({p_tilde, 1.0 - p_tilde});
}

}  // namespace mixlink
