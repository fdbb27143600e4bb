#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snrbench/attribution/attribution.hpp"
#include "snrbench/symfunc/dataset.hpp"

namespace snrbench::bench {

inline constexpr int kDatasetFormatVersion = 1;

enum class Scaling { none, minmax };
enum class Balance { none, undersample };
enum class AnnotationPolicy { required, optional };

Scaling scaling_from_string(std::string_view text);
Balance balance_from_string(std::string_view text);

/// Sidecar path for a dataset CSV: same stem, ".json" extension.
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Writes the CSV (header x0..x{n-1},y) and its JSON sidecar. Values are
/// written in shortest round-trip form, so load(save(d)) == d bit for bit.
void save_dataset(const TabularDataset& data, const std::filesystem::path& csv_path);

/// Reads a dataset written by save_dataset. Without a sidecar, `required`
/// throws ErrorCode::missing_annotation; `optional` loads the CSV (last
/// column is the target) with empty predictive_indices and every row in train.
TabularDataset load_dataset(const std::filesystem::path& csv_path,
                            AnnotationPolicy policy = AnnotationPolicy::required);

struct IngestOptions {
    Scaling scaling = Scaling::minmax;
    Balance balance = Balance::none;
    std::string label_column;  // empty: last column
    double split_ratio = 0.8;
    std::uint64_t seed = 0;
};

/// Loads an external numeric CSV with a header row. Optional undersampling
/// of the majority class to 1:1 happens before the split; min-max bounds
/// come from training rows only (constant columns map to 0).
TabularDataset load_tabular_csv(const std::filesystem::path& path, const IngestOptions& options);

/// Long-form attribution rows: sample_id,method,feature_index,value.
void write_attribution_header(std::ostream& out);
void write_attribution_rows(std::ostream& out, std::size_t sample_id, const attribution::AttributionVector& attrib);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

}  // namespace snrbench::bench
