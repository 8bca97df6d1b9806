#pragma once

#include <Eigen/Dense>
#include <string>

#include "mcabs/errors.hpp"
#include "mcabs/eval.hpp"
#include "mcabs/harness.hpp"
#include "mcabs/solver.hpp"

namespace mcabs {

// Dense matrix as CSV, no header, one row per line. Values are written with
// enough digits to round-trip a double exactly.
Eigen::MatrixXd load_matrix(const std::string& path);
void store_matrix(const std::string& path, const Eigen::MatrixXd& m);

void store_trace_csv(const std::string& path, const SolverTrace& trace);
void store_eval_report_csv(const std::string& path, const EvalReport& report);
void store_sweep_records_csv(const std::string& path, const std::vector<SweepRecord>& records);
void store_sweep_aggregates_csv(const std::string& path,
                                const std::vector<CellAggregate>& aggregates);

}  // namespace mcabs
