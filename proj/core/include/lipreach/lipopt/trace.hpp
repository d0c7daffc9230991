#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace lipreach::lipopt {

/// One row per evaluation of the outermost objective. Row 0 summarises the
/// two endpoint evaluations.
struct TraceRecord {
    std::size_t iteration = 0;
    double lower = 0.0;
    double upper = 0.0;
    double point = 0.0;
    double value = 0.0;
    double lipschitz = 0.0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/// Anytime audit trail of a solve, always in the minimization frame of the
/// solver: for a maximization the recorded values belong to -o.
struct BoundsTrace {
    std::vector<TraceRecord> records;
    bool budget_exhausted = false;
    bool negated = false;

    void write_csv(std::ostream& out) const;
    std::string to_csv() const;

    friend bool operator==(const BoundsTrace&, const BoundsTrace&) = default;
};

inline constexpr const char* kTraceCsvHeader = "iter,l,u,y,w,K";

}  // namespace lipreach::lipopt
