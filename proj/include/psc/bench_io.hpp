#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "psc/dataset.hpp"
#include "psc/regressor.hpp"

namespace psc {

/// First row of every CSV this project writes.
inline constexpr int kSchemaVersion = 1;

std::string schema_row();

/// %.12g, with ".0" appended to integral values ("1" -> "1.0").
std::string format_decimal(double value);

/// Dataset CSV: schema row, header, then one row per sample:
/// index,cx,cy,w,h,theta,is_square,f0..f7 (full round-trip precision).
void write_dataset_csv(const std::vector<Sample>& data, const std::filesystem::path& path);
std::vector<Sample> read_dataset_csv(const std::filesystem::path& path);

void save_model(const Regressor& model, const std::filesystem::path& path);
Regressor load_model(const std::filesystem::path& path);

}  // namespace psc
