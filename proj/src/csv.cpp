#include "strauss/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace strauss {

std::string format_double(double value) {
    if (std::isnan(value)) return "NaN";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    if (text == "NaN" || text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end) throw std::invalid_argument("not a number: '" + text + "'");
    return value;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::invalid_argument("CSV has no column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
    return parse_double(rows.at(row).at(column(name)));
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line);
        if (first) {
            table.header = std::move(fields);
            first = false;
            continue;
        }
        if (fields.size() != table.header.size())
            throw std::invalid_argument("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                                        std::to_string(table.header.size()));
        table.rows.push_back(std::move(fields));
    }
    if (first) throw std::invalid_argument("CSV is empty");
    return table;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string snapshot_csv(const std::vector<Snapshot>& snapshots, double dr) {
    std::string out = "t,r,u,ut\n";
    for (const Snapshot& snap : snapshots) {
        const std::string t = format_double(snap.t);
        for (std::size_t i = 0; i < snap.u.size(); ++i) {
            out += t;
            out += ',';
            out += format_double(static_cast<double>(i) * dr);
            out += ',';
            out += format_double(snap.u[i]);
            out += ',';
            out += format_double(snap.ut[i]);
            out += '\n';
        }
    }
    return out;
}

std::vector<Snapshot> parse_snapshot_csv(const std::string& text, double& dr) {
    const CsvTable table = parse_csv(text);
    const std::size_t ct = table.column("t");
    const std::size_t cr = table.column("r");
    const std::size_t cu = table.column("u");
    const std::size_t cut = table.column("ut");
    std::vector<Snapshot> out;
    dr = 0.0;
    for (const auto& row : table.rows) {
        const double t = parse_double(row[ct]);
        const double r = parse_double(row[cr]);
        if (out.empty() || out.back().t != t) {
            if (!out.empty() && t < out.back().t) throw std::invalid_argument("snapshot times must increase");
            out.push_back({t, {}, {}});
            if (r != 0.0) throw std::invalid_argument("each snapshot must start at r = 0");
        }
        Snapshot& snap = out.back();
        if (snap.u.size() == 1 && dr == 0.0) dr = r;
        snap.u.push_back(parse_double(row[cu]));
        snap.ut.push_back(parse_double(row[cut]));
    }
    if (out.empty()) throw std::invalid_argument("snapshot file has no rows");
    for (const auto& snap : out)
        if (snap.u.size() != out.front().u.size()) throw std::invalid_argument("snapshots have differing node counts");
    if (!(dr > 0.0)) throw std::invalid_argument("snapshot file needs at least two radii");
    return out;
}

std::string outcome_csv(double eps, const SolveOutcome& outcome) {
    return "eps,status,t_end,dr,dt,threshold\n" + format_double(eps) + "," + to_string(outcome.status) + "," +
           format_double(outcome.t_end) + "," + format_double(outcome.dr) + "," + format_double(outcome.dt) + "," +
           format_double(outcome.threshold) + "\n";
}

std::string inequality_csv(const std::vector<InequalityReport>& reports) {
    std::string out = "check,Tgrid_point,lhs,rhs,ratio\n";
    for (const auto& report : reports)
        for (const auto& row : report.rows)
            out += to_string(report.kind) + "," + format_double(row.point) + "," + format_double(row.lhs) + "," +
                   format_double(row.rhs) + "," + format_double(row.ratio) + "\n";
    return out;
}

}  // namespace strauss
