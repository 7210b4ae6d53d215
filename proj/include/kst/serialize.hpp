#pragma once

#include <iosfwd>
#include <string>

#include "kst/solver.hpp"

namespace kst {

/// Shortest round-trip decimal text for a double.
std::string format_double(double v);

/// Model document, format tag "kst-model/1". Inner maps carry their exact
/// breakpoints and plateau tables as "p/q" strings; table-backed outer
/// functions store (k, i, j, value) knots whose exact positions are
/// rebuilt from the plateau tables, explicit knots store {"a","b"} texts.
/// serialize(deserialize(s)) == s byte for byte.
std::string serialize_model(const KSRepresentation& rep);
KSRepresentation deserialize_model(const std::string& text);

/// Inner-map document, format tag "kst-inner/1" (the build-phi output).
std::string serialize_inner(const InnerMap& map);
InnerMap deserialize_inner(const std::string& text);

void write_report_csv(std::ostream& os, const RunReport& report);

/// Per-point residual rows "x,y,f,S_phi_h,residual" over a g x g grid.
void write_residual_csv(std::ostream& os, const F2D& f, const KSRepresentation& rep, int grid);

}  // namespace kst
