#include "mcabs/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace mcabs {

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    return out;
}

double parse_field(const std::string& field, const std::string& path, std::size_t line_no) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end != begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || begin == end) {
        throw FormatError(path + ": invalid number '" + field + "' on line " +
                          std::to_string(line_no));
    }
    return value;
}

}  // namespace

Eigen::MatrixXd load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string field = line.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            row.push_back(parse_field(field, path, line_no));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw FormatError(path + ": ragged row on line " + std::to_string(line_no) +
                              " (expected " + std::to_string(rows.front().size()) +
                              " columns, got " + std::to_string(row.size()) + ")");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError(path + ": empty file");

    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return m;
}

void store_matrix(const std::string& path, const Eigen::MatrixXd& m) {
    if (m.rows() == 0 || m.cols() == 0) throw ParameterError("store_matrix: empty matrix");
    std::ofstream out = open_out(path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << fmt(m(i, j));
        }
        out << '\n';
    }
}

void store_trace_csv(const std::string& path, const SolverTrace& trace) {
    std::ofstream out = open_out(path);
    out << "iter,total,smooth,l1_u,l1_v,alpha,beta,gamma,du,dp,dv,elapsed_ms\n";
    for (const auto& r : trace.records) {
        out << r.iter << ',' << fmt(r.objective.total) << ',' << fmt(r.objective.smooth_loss)
            << ',' << fmt(r.objective.l1_u) << ',' << fmt(r.objective.l1_v) << ','
            << fmt(r.alpha) << ',' << fmt(r.beta) << ',' << fmt(r.gamma) << ',' << fmt(r.du)
            << ',' << fmt(r.dp) << ',' << fmt(r.dv) << ',' << fmt(r.elapsed_ms) << '\n';
    }
}

void store_eval_report_csv(const std::string& path, const EvalReport& report) {
    std::ofstream out = open_out(path);
    out << "approx_error,nnz_u,nnz_v,mstep_m,mstep_err,exact_ms,kernel_ms\n";
    if (report.msteps.empty()) {
        out << fmt(report.approx_error) << ',' << fmt(report.nnz_u_mean) << ','
            << fmt(report.nnz_v_mean) << ",,,,\n";
        return;
    }
    for (const auto& m : report.msteps) {
        out << fmt(report.approx_error) << ',' << fmt(report.nnz_u_mean) << ','
            << fmt(report.nnz_v_mean) << ',' << m.m << ',' << fmt(m.max_abs_err) << ','
            << fmt(m.exact_ms) << ',' << fmt(m.kernel_ms) << '\n';
    }
}

void store_sweep_records_csv(const std::string& path, const std::vector<SweepRecord>& records) {
    std::ofstream out = open_out(path);
    out << "kernel_size,lambda,step_policy,step,instance,approx_error,nnz_u,nnz_v,iters,"
           "term_reason,total_ms,per_iter_ms,diverged\n";
    for (const auto& r : records) {
        out << r.kernel_size << ',' << fmt(r.lambda) << ',' << to_string(r.policy) << ','
            << fmt(r.step) << ',' << r.instance << ',' << fmt(r.approx_error) << ','
            << fmt(r.nnz_u) << ',' << fmt(r.nnz_v) << ',' << r.iters << ','
            << (r.diverged ? "diverged" : to_string(r.reason)) << ',' << fmt(r.total_ms) << ','
            << fmt(r.per_iter_ms) << ',' << (r.diverged ? 1 : 0) << '\n';
    }
}

void store_sweep_aggregates_csv(const std::string& path,
                                const std::vector<CellAggregate>& aggregates) {
    std::ofstream out = open_out(path);
    out << "kernel_size,lambda,step_policy,step,mean_error,std_error,mean_ms,std_ms,mean_iters,"
           "n_diverged\n";
    for (const auto& a : aggregates) {
        out << a.kernel_size << ',' << fmt(a.lambda) << ',' << to_string(a.policy) << ','
            << fmt(a.step) << ',' << fmt(a.mean_error) << ',' << fmt(a.std_error) << ','
            << fmt(a.mean_ms) << ',' << fmt(a.std_ms) << ',' << fmt(a.mean_iters) << ','
            << a.n_diverged << '\n';
    }
}

}  // namespace mcabs
