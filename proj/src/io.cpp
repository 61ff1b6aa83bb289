#include "hawkesnet/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace hawkesnet::io {

namespace fs = std::filesystem;

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string events_to_json(const EventData& data) {
    std::string out = "{\"d\": " + std::to_string(data.dim()) + ", \"T\": " + format_double(data.horizon()) +
                      ", \"events\": [";
    for (std::size_t k = 0; k < data.dim(); ++k) {
        out += k == 0 ? "\n  [" : ",\n  [";
        const auto& times = data.node(k);
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (i > 0) out += ", ";
            out += format_double(times[i]);
        }
        out += "]";
    }
    out += "\n]}\n";
    return out;
}

void write_events_json(const fs::path& path, const EventData& data) {
    write_text(path, events_to_json(data));
}

EventData events_from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    const auto d = doc.at("d").get<std::size_t>();
    const auto T = doc.at("T").get<double>();
    auto events = doc.at("events").get<std::vector<std::vector<double>>>();
    if (events.size() != d) throw std::invalid_argument("event file: \"d\" does not match the number of lists");
    return EventData(T, std::move(events));
}

namespace {

std::vector<std::vector<double>> parse_csv_rows(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            std::size_t used = 0;
            const double value = std::stod(cell, &used);
            if (cell.find_first_not_of(" \t", used) != std::string::npos) {
                throw std::invalid_argument("CSV: cannot parse '" + cell + "'");
            }
            row.push_back(value);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

EventData read_events(const fs::path& path, std::size_t csv_dim, double csv_horizon) {
    const std::string text = read_text(path);
    if (path.extension() != ".csv") return events_from_json(text);

    if (csv_dim == 0 || !(csv_horizon > 0.0)) {
        throw std::invalid_argument("CSV event input needs the node count and horizon");
    }
    std::vector<std::vector<double>> events(csv_dim);
    for (const auto& row : parse_csv_rows(text)) {
        if (row.size() != 2) throw std::invalid_argument("CSV event rows must be node,time");
        const double node = row[0];
        if (node < 0.0 || node != static_cast<double>(static_cast<std::size_t>(node)) ||
            static_cast<std::size_t>(node) >= csv_dim) {
            throw std::invalid_argument("CSV event row has an invalid node index");
        }
        events[static_cast<std::size_t>(node)].push_back(row[1]);
    }
    for (auto& times : events) std::sort(times.begin(), times.end());
    return EventData(csv_horizon, std::move(events));
}

void write_matrix_csv(const fs::path& path, const MatrixXd& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    write_text(path, out);
}

MatrixXd read_matrix_csv(const fs::path& path) {
    const auto rows = parse_csv_rows(read_text(path));
    if (rows.empty()) return MatrixXd(0, 0);
    const auto cols = rows.front().size();
    MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw std::invalid_argument("matrix CSV is ragged: " + path.string());
        for (std::size_t j = 0; j < cols; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

void write_vector_csv(const fs::path& path, const VectorXd& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out += format_double(v(i));
        out += '\n';
    }
    write_text(path, out);
}

VectorXd read_vector_csv(const fs::path& path) {
    const auto rows = parse_csv_rows(read_text(path));
    VectorXd v(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != 1) throw std::invalid_argument("vector CSV needs one value per line: " + path.string());
        v(static_cast<Eigen::Index>(i)) = rows[i][0];
    }
    return v;
}

void write_support_csv(const fs::path& path, const SupportMatrix& s) {
    write_matrix_csv(path, s.cast<double>().matrix());
}

SupportMatrix read_support_csv(const fs::path& path) {
    const MatrixXd m = read_matrix_csv(path);
    if (!((m.array() == 0.0) || (m.array() == 1.0)).all()) {
        throw std::invalid_argument("support CSV must contain only 0 and 1");
    }
    return m.array() != 0.0;
}

}  // namespace hawkesnet::io
