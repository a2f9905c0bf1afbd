#pragma once

#include <map>
#include <string>
#include <vector>

#include "strauss/functionals.hpp"
#include "strauss/solver.hpp"

namespace strauss {

/// Shortest round-trip text for a double; non-finite values are spelled NaN, inf, -inf.
std::string format_double(double value);
double parse_double(const std::string& text);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
};

/// Comma separated, first line is the header. Blank lines are skipped.
CsvTable parse_csv(const std::string& text);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// `t,r,u,ut`, one row per node per snapshot.
std::string snapshot_csv(const std::vector<Snapshot>& snapshots, double dr);
/// Rebuilds snapshots from `t,r,u,ut`; returns the grid spacing through `dr`.
std::vector<Snapshot> parse_snapshot_csv(const std::string& text, double& dr);

/// `eps,status,t_end,dr,dt,threshold`.
std::string outcome_csv(double eps, const SolveOutcome& outcome);

/// `check,Tgrid_point,lhs,rhs,ratio`.
std::string inequality_csv(const std::vector<InequalityReport>& reports);

}  // namespace strauss
