#include "lipreach/lipopt/trace.hpp"

#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace lipreach::lipopt {

void BoundsTrace::write_csv(std::ostream& out) const {
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    out << kTraceCsvHeader << '\n';
    for (const TraceRecord& r : records) {
        out << r.iteration << ',' << r.lower << ',' << r.upper << ',' << r.point << ',' << r.value
            << ',' << r.lipschitz << '\n';
    }
    out.precision(old_precision);
}

std::string BoundsTrace::to_csv() const {
    std::ostringstream out;
    write_csv(out);
    return out.str();
}

}  // namespace lipreach::lipopt
