#include "swagger/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "swagger/error.hpp"

namespace swagger {

Matrix read_csv_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(Errc::io, path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(Errc::io, path + ":" + std::to_string(lineno) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(Errc::io, path + ": no data");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

void write_csv_grid(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io, "cannot write " + path);
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
    out << '\n';
  }
  if (!out) throw Error(Errc::io, "write failed for " + path);
}

Vector read_signal_csv(const std::string& path) {
  const Matrix m = read_csv_grid(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw Error(Errc::io, path + ": signal must be a single row or column");
}

void write_signal_csv(const std::string& path, const Vector& x) { write_csv_grid(path, Matrix(x)); }

namespace {

// Next header token, skipping whitespace and comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  for (int c = in.get(); c != EOF; c = in.get()) {
    if (c == '#') {
      in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
      if (!tok.empty()) break;
    } else if (std::isspace(c)) {
      if (!tok.empty()) break;
    } else {
      tok.push_back(static_cast<char>(c));
    }
  }
  return tok;
}

}  // namespace

Image read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  if (pgm_token(in) != "P5") throw Error(Errc::io, path + ": not a binary PGM (P5)");
  long w = 0, h = 0, maxval = 0;
  try {
    w = std::stol(pgm_token(in));
    h = std::stol(pgm_token(in));
    maxval = std::stol(pgm_token(in));
  } catch (const std::exception&) {
    throw Error(Errc::io, path + ": malformed PGM header");
  }
  if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) throw Error(Errc::io, path + ": bad PGM dimensions");
  Image img;
  img.height = h;
  img.width = w;
  img.pixels.resize(h * w);
  const int bytes = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> buf(static_cast<std::size_t>(h * w * bytes));
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size())) throw Error(Errc::io, path + ": truncated pixel data");
  // PGM is row-major.
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      const std::size_t k = static_cast<std::size_t>((r * w + c) * bytes);
      const unsigned v = bytes == 2 ? (buf[k] << 8) | buf[k + 1] : buf[k];
      img.at(r, c) = static_cast<double>(v) / static_cast<double>(maxval);
    }
  }
  return img;
}

void write_pgm(const std::string& path, const Image& img) {
  if (img.pixels.size() != img.height * img.width) throw Error(Errc::shape, "pixel count does not match image size");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write " + path);
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  for (Index r = 0; r < img.height; ++r) {
    for (Index c = 0; c < img.width; ++c) {
      const double v = std::clamp(img.at(r, c), 0.0, 1.0);
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
  }
  if (!out) throw Error(Errc::io, "write failed for " + path);
}

void write_report_csv(std::ostream& out, const TrialReport& report, bool header) {
  if (header) {
    out << "structure,method,tuning,support_pct,jacard,mse_in_support,"
           "support_pct_stderr,jacard_stderr,mse_in_support_stderr,trials,seed\n";
  }
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& s : report.summary) {
    out << to_string(report.spec.structure) << ',' << to_string(s.method) << ',' << to_string(s.tuning) << ','
        << s.mean.support_pct << ',' << s.mean.jacard << ',' << s.mean.mse_in_support << ','
        << s.stderr_.support_pct << ',' << s.stderr_.jacard << ',' << s.stderr_.mse_in_support << ',' << s.trials
        << ',' << report.spec.seed << '\n';
  }
  out.precision(old);
}

void write_report_json(std::ostream& out, const TrialReport& report) {
  using nlohmann::json;
  auto metrics = [](const Metrics& m) {
    return json{{"support_pct", m.support_pct}, {"jacard", m.jacard}, {"mse_in_support", m.mse_in_support}};
  };
  const auto& sp = report.spec;
  json j;
  j["spec"] = {{"n_obs", sp.n_obs},   {"n_vars", sp.n_vars},           {"snr_db", sp.snr_db},
               {"structure", to_string(sp.structure)}, {"trials", sp.trials}, {"seed", sp.seed},
               {"lambda_grid", sp.lambda_grid},        {"support_tol", sp.support_tol},
               {"pshrink_p", sp.pshrink_p}};
  j["skipped"] = report.skipped;
  json summary = json::array();
  for (const auto& s : report.summary) {
    summary.push_back({{"method", to_string(s.method)},
                       {"tuning", to_string(s.tuning)},
                       {"mean", metrics(s.mean)},
                       {"stderr", metrics(s.stderr_)},
                       {"trials", s.trials}});
  }
  j["summary"] = summary;
  json trials = json::array();
  for (const auto& r : report.records) {
    json t{{"trial", r.trial}, {"skipped", r.skipped}};
    if (r.skipped) {
      t["skip_reason"] = r.skip_reason;
    } else {
      t["true_support"] = r.true_support;
      json per = json::object();
      for (std::size_t mi = 0; mi < 4; ++mi) {
        json m = json::object();
        for (std::size_t ti = 0; ti < 2; ++ti) {
          auto o = metrics(r.outcome[mi][ti].metrics);
          o["lambda"] = r.outcome[mi][ti].lambda;
          m[to_string(kTuningModes[ti])] = o;
        }
        per[to_string(kMethods[mi])] = m;
      }
      t["methods"] = per;
    }
    trials.push_back(t);
  }
  j["trials"] = trials;
  out << j.dump(2) << '\n';
}

}  // namespace swagger
