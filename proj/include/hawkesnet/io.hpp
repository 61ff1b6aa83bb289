#pragma once

#include "hawkesnet/model.hpp"
#include "hawkesnet/simulate.hpp"

#include <filesystem>
#include <string>

namespace hawkesnet::io {

/// Event files: JSON {"d": int, "T": float, "events": [[t, ...], ...]} with
/// 17 significant digits, or CSV rows "node,time" (0-based node) on input.
/// CSV input needs d and T from the caller because the rows do not carry them.
void write_events_json(const std::filesystem::path& path, const EventData& data);
std::string events_to_json(const EventData& data);
EventData read_events(const std::filesystem::path& path, std::size_t csv_dim = 0, double csv_horizon = 0.0);
EventData events_from_json(const std::string& text);

/// Plain CSV, row-major, no header.
void write_matrix_csv(const std::filesystem::path& path, const MatrixXd& m);
MatrixXd read_matrix_csv(const std::filesystem::path& path);

/// One value per line.
void write_vector_csv(const std::filesystem::path& path, const VectorXd& v);
VectorXd read_vector_csv(const std::filesystem::path& path);

/// 0/1 CSV matrix.
void write_support_csv(const std::filesystem::path& path, const SupportMatrix& s);
SupportMatrix read_support_csv(const std::filesystem::path& path);

/// %.17g: reads back to the same double.
std::string format_double(double value);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace hawkesnet::io
