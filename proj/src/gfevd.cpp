#include "spillnet/gfevd.hpp"

#include <cmath>

#include "spillnet/csv.hpp"
#include "spillnet/errors.hpp"

namespace spillnet {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

SpilloverMatrix compute_gfevd(const VarModel& model, int h, HorizonConvention convention,
                              std::vector<std::string> labels) {
    if (h < 0) throw EstimationError("compute_gfevd: h must be >= 0");
    const Index n = model.n;
    const MatrixXd& sigma = model.sigma;
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + sigma.cwiseAbs().maxCoeff()))
        throw EstimationError("compute_gfevd: sigma is not symmetric");
    for (Index j = 0; j < n; ++j)
        if (!(sigma(j, j) > 0.0))
            throw EstimationError("compute_gfevd: nonpositive innovation variance in column " +
                                  std::to_string(j));

    const int terms = convention == HorizonConvention::Inclusive ? h + 1 : h;
    if (terms < 1) throw EstimationError("compute_gfevd: empty forecast sum (h=0, truncated)");

    const MaCoefficients ma = ma_coefficients(model, terms - 1);

    MatrixXd numerator = MatrixXd::Zero(n, n);   // accumulates (e_i' Phi_l Sigma e_j)^2
    VectorXd denominator = VectorXd::Zero(n);    // accumulates e_i' Phi_l Sigma Phi_l' e_i
    for (int l = 0; l < terms; ++l) {
        const MatrixXd& phi = ma.phis[static_cast<std::size_t>(l)];
        const MatrixXd a = phi * sigma;  // a(i,j) = e_i' Phi_l Sigma e_j
        numerator += a.cwiseProduct(a);
        for (Index i = 0; i < n; ++i) denominator(i) += a.row(i).dot(phi.row(i));
    }

    SpilloverMatrix out;
    out.h = h;
    out.theta_raw.resize(n, n);
    out.theta_norm.resize(n, n);
    for (Index i = 0; i < n; ++i) {
        if (!(denominator(i) > 0.0))
            throw EstimationError("compute_gfevd: zero forecast error variance in row " +
                                  std::to_string(i));
        for (Index j = 0; j < n; ++j)
            out.theta_raw(i, j) = numerator(i, j) / (sigma(j, j) * denominator(i));
        const double row_sum = out.theta_raw.row(i).sum();
        out.theta_norm.row(i) = out.theta_raw.row(i) * (100.0 / row_sum);
    }
    if (labels.empty())
        for (Index i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
    if (static_cast<Index>(labels.size()) != n)
        throw EstimationError("compute_gfevd: label count does not match n");
    out.labels = std::move(labels);
    return out;
}

SpilloverSummary summarize(const SpilloverMatrix& m) {
    const Index n = m.theta_norm.rows();
    SpilloverSummary s;
    s.labels = m.labels;
    s.from_others.resize(n);
    s.to_others.resize(n);
    s.net.resize(n);
    for (Index i = 0; i < n; ++i) {
        s.from_others(i) = m.theta_norm.row(i).sum() - m.theta_norm(i, i);
        s.to_others(i) = m.theta_norm.col(i).sum() - m.theta_norm(i, i);
    }
    s.net = s.to_others - s.from_others;
    s.total = s.from_others.sum();
    return s;
}

void write_spillover_csv(const std::string& path, const SpilloverMatrix& m) {
    const SpilloverSummary s = summarize(m);
    const Index n = m.theta_norm.rows();
    CsvTable table;
    table.header.push_back("node");
    for (const auto& label : m.labels) table.header.push_back(label);
    table.header.push_back("from_others");
    for (Index i = 0; i < n; ++i) {
        std::vector<std::string> row;
        row.push_back(m.labels[static_cast<std::size_t>(i)]);
        for (Index j = 0; j < n; ++j) row.push_back(format_double(m.theta_norm(i, j)));
        row.push_back(format_double(s.from_others(i)));
        table.rows.push_back(std::move(row));
    }
    std::vector<std::string> to_row{"to_others"}, net_row{"net"}, total_row{"total"};
    for (Index j = 0; j < n; ++j) {
        to_row.push_back(format_double(s.to_others(j)));
        net_row.push_back(format_double(s.net(j)));
        total_row.push_back(j == 0 ? format_double(s.total) : "");
    }
    to_row.push_back("");
    net_row.push_back("");
    total_row.push_back("");
    table.rows.push_back(std::move(to_row));
    table.rows.push_back(std::move(net_row));
    table.rows.push_back(std::move(total_row));
    write_csv(path, table);
}

SpilloverMatrix read_spillover_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    if (table.header.size() < 3 || table.header.front() != "node" ||
        table.header.back() != "from_others")
        throw IngestError(path + ": not a spillover table");
    const Index n = static_cast<Index>(table.header.size()) - 2;
    if (static_cast<Index>(table.rows.size()) < n + 3)
        throw IngestError(path + ": truncated spillover table");
    SpilloverMatrix m;
    m.theta_norm.resize(n, n);
    for (Index i = 0; i < n; ++i) {
        const auto& row = table.rows[static_cast<std::size_t>(i)];
        if (static_cast<Index>(row.size()) != n + 2)
            throw IngestError(path + ": bad matrix row width");
        m.labels.push_back(row[0]);
        for (Index j = 0; j < n; ++j) {
            auto v = parse_cell_number(row[static_cast<std::size_t>(j) + 1],
                                       path + " matrix row " + std::to_string(i));
            if (!v) throw IngestError(path + ": blank matrix cell");
            m.theta_norm(i, j) = *v;
        }
    }
    m.theta_raw = m.theta_norm / 100.0;
    return m;
}

}  // namespace spillnet
