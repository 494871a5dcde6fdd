#include "biharm/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace biharm {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) line(r);
    if (!out) throw std::runtime_error("write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

CsvTable profile_table(const ProblemParams& P, const PeriodicSolution& sol, int samples) {
    CsvTable t;
    t.header = {"t", "v", "v1", "v2", "v3", "energy"};
    const Real span = sol.is_constant() ? 1 : sol.period;
    for (int k = 0; k <= samples; ++k) {
        const Real time = span * k / samples;
        const PhaseState s = sol.state_at(time);
        t.rows.push_back({format_double(static_cast<double>(time)), format_double(static_cast<double>(s.v)),
                          format_double(static_cast<double>(s.v1)), format_double(static_cast<double>(s.v2)),
                          format_double(static_cast<double>(s.v3)),
                          format_double(static_cast<double>(energy(P, s)))});
    }
    return t;
}

CsvTable family_table(const std::vector<FamilyRecord>& rows) {
    CsvTable t;
    t.header = {"a", "beta_star", "period", "energy", "v_max", "status"};
    for (const auto& r : rows) {
        std::string status = r.status;
        for (char& ch : status)
            if (ch == ',' || ch == '\n') ch = ';';
        if (r.ok())
            t.rows.push_back({format_double(r.a), format_double(r.beta_star), format_double(r.period),
                              format_double(r.energy), format_double(r.v_max), status});
        else
            t.rows.push_back({format_double(r.a), "", "", "", "", status});
    }
    return t;
}

std::vector<FamilyRecord> parse_family_table(const CsvTable& table) {
    const auto num = [](const std::string& s) {
        double x = 0;
        if (s.empty()) return x;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
        if (res.ec != std::errc()) throw std::runtime_error("bad number '" + s + "'");
        return x;
    };
    std::vector<FamilyRecord> out;
    for (const auto& r : table.rows) {
        if (r.size() < 6) throw std::runtime_error("family table row has too few columns");
        FamilyRecord rec;
        rec.a = num(r[0]);
        rec.beta_star = num(r[1]);
        rec.period = num(r[2]);
        rec.energy = num(r[3]);
        rec.v_max = num(r[4]);
        rec.status = r[5];
        out.push_back(rec);
    }
    return out;
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path);
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return nlohmann::json::parse(in);
}

std::string manifest_path(const std::string& output_path) { return output_path + ".manifest.json"; }

}  // namespace biharm
