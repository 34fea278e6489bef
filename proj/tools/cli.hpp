#pragma once

// Command-line front end: subcommands constants, sample, energy, liyau,
// minimize, integrate, leafed and classify.
//
// Curves travel between subcommands as CSV: an optional "# closed=1|0" line,
// a header "s,x,y[,z][,k...]" and one row per vertex at 17 significant digits.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "elastica/discrete.hpp"

namespace elastica::cli {

enum ExitCode : int {
    kOk = 0,
    kInternalError = 1,
    kInputError = 2,
    kInfeasible = 3,
    kNotSatisfied = 4, // liyau: bound violated
};

// Extra columns are written after x, y[, z] under the given names.
void write_csv(std::ostream& os, const DiscreteCurve& c, const Eigen::VectorXd& s,
               const std::vector<std::pair<std::string, Eigen::VectorXd>>& extra = {});
// Throws std::invalid_argument on a malformed table.
DiscreteCurve read_csv(std::istream& is);
// Polyline of the x-y projection scaled into the unit box.
void write_svg(std::ostream& os, const DiscreteCurve& c);

// args excludes the program name. Reads "-" (or a missing input path) from in.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace elastica::cli
