#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgflow/gallery.hpp"
#include "sgflow/norms.hpp"
#include "sgflow/trajectory.hpp"

namespace sgflow {

// Snapshot persistence: <base>.json holds the metadata document and
// <base>.f64 the raw little-endian 64-bit float array (interleaved re/im
// for spectral fields, plain samples for line fields). Loaders validate the
// field invariants.
void save_field(const TorusField& f, const std::string& base_path,
                double time = -1.0);
void save_field(const LineField& f, const std::string& base_path,
                double time = -1.0);
GalleryField load_field(const std::string& base_path);

void save_trajectory(const Trajectory& traj, const std::string& dir);
Trajectory load_trajectory(const std::string& dir);

std::string norm_report_to_json(const NormReport& rep);
// Header and row of the CSV emission (norm_name, R, m, value, argmax_t,
// argmax_x, argmax_r).
std::string norm_report_csv_header();
std::string norm_report_csv_row(const NormReport& rep);

// RFC-style CSV quoting of one cell.
std::string csv_quote(const std::string& cell);

std::uint64_t fnv1a64(const void* data, size_t size);
std::uint64_t fnv1a64_file(const std::string& path);

// Writes dir/manifest.json listing every given file with size and content
// hash (paths relative to dir).
void write_manifest(const std::string& dir, const std::vector<std::string>& files);

}  // namespace sgflow
