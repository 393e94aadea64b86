#pragma once

#include <iosfwd>
#include <string>

#include "swagger/experiments.hpp"

namespace swagger {

/// Comma-separated rows. Throws io on unreadable files or ragged rows.
Matrix read_csv_grid(const std::string& path);
void write_csv_grid(const std::string& path, const Matrix& m);

/// A signal is a single column, or a single row, of a CSV grid.
Vector read_signal_csv(const std::string& path);
void write_signal_csv(const std::string& path, const Vector& x);

/// Binary PGM (P5), 8 or 16 bit. Pixels are scaled to [0, 1].
Image read_pgm(const std::string& path);
/// Values are clamped to [0, 1] and written as 8 bit.
void write_pgm(const std::string& path, const Image& img);

/// One row per (structure, method, tuning mode).
void write_report_csv(std::ostream& out, const TrialReport& report, bool header = true);
/// Spec, summary and per-trial values.
void write_report_json(std::ostream& out, const TrialReport& report);

}  // namespace swagger
