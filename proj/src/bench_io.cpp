#include "psc/bench_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace psc {
namespace {

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

std::string schema_row() { return "schema_version," + std::to_string(kSchemaVersion); }

std::string format_decimal(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  std::string s = buf;
  if (std::isfinite(value) && s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

void write_dataset_csv(const std::vector<Sample>& data, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << schema_row() << '\n';
  out << "index,cx,cy,w,h,theta,is_square";
  for (int i = 0; i < kFeatureDim; ++i) out << ",f" << i;
  out << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Sample& s = data[i];
    if (s.features.size() != static_cast<std::size_t>(kFeatureDim)) {
      throw std::invalid_argument("write_dataset_csv: unexpected feature length");
    }
    out << i << ',' << exact(s.box.cx) << ',' << exact(s.box.cy) << ',' << exact(s.box.w) << ','
        << exact(s.box.h) << ',' << exact(s.box.theta) << ',' << (s.is_square ? 1 : 0);
    for (double f : s.features) out << ',' << exact(f);
    out << '\n';
  }
}

std::vector<Sample> read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != schema_row()) {
    throw std::runtime_error(path.string() + ": missing or unsupported schema row");
  }
  std::getline(in, line);  // header
  const std::size_t columns = 7 + kFeatureDim;
  std::vector<Sample> data;
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != columns) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(columns) + " columns");
    }
    Sample s;
    s.box = {std::stod(cells[1]), std::stod(cells[2]), std::stod(cells[3]), std::stod(cells[4]),
             std::stod(cells[5])};
    s.target_theta = Angle(s.box.theta);
    s.is_square = cells[6] == "1";
    for (std::size_t i = 7; i < columns; ++i) s.features.push_back(std::stod(cells[i]));
    data.push_back(std::move(s));
  }
  return data;
}

void save_model(const Regressor& model, const std::filesystem::path& path) {
  auto out = open_out(path);
  model.save(out);
}

Regressor load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return Regressor::load(in);
}

}  // namespace psc
