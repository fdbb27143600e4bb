#include "snrbench/bench/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "snrbench/error.hpp"
#include "snrbench/rng.hpp"

namespace snrbench::bench {

namespace {

using nlohmann::json;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) {
            return fields;
        }
        start = comma + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::io, "cannot read " + path.string());
    }
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r" || line.front() == '#') {
            continue;
        }
        const auto fields = split_fields(line);
        if (table.header.empty()) {
            for (auto f : fields) {
                table.header.emplace_back(trim(f));
            }
            continue;
        }
        if (fields.size() != table.header.size()) {
            fail(ErrorCode::parse, path.string() + ": row " + std::to_string(line_no) + " has " +
                                       std::to_string(fields.size()) + " fields, header has " +
                                       std::to_string(table.header.size()));
        }
        std::vector<double> values(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            try {
                values[c] = parse_double(trim(fields[c]));
            } catch (const Error&) {
                fail(ErrorCode::parse, path.string() + ": non-numeric value '" + std::string(trim(fields[c])) +
                                           "' at row " + std::to_string(line_no) + ", column " +
                                           std::to_string(c + 1) + " (" + table.header[c] + ")");
            }
        }
        table.rows.push_back(std::move(values));
    }
    if (table.header.empty()) {
        fail(ErrorCode::parse, path.string() + ": missing header row");
    }
    return table;
}

json noise_to_json(const NoiseSpec& noise) {
    return {{"n_noise", noise.n_noise},
            {"feature_dist", std::string(to_string(noise.feature_dist))},
            {"label_noise_std", noise.label_noise_std},
            {"seed", noise.seed}};
}

NoiseSpec noise_from_json(const json& j) {
    NoiseSpec noise;
    noise.n_noise = j.at("n_noise").get<std::size_t>();
    noise.feature_dist = feature_dist_from_string(j.at("feature_dist").get<std::string>());
    noise.label_noise_std = j.at("label_noise_std").get<double>();
    noise.seed = j.at("seed").get<std::uint64_t>();
    return noise;
}

bool is_binary(const std::vector<double>& labels) {
    return !labels.empty() && std::all_of(labels.begin(), labels.end(), [](double y) { return y == 0.0 || y == 1.0; });
}

}  // namespace

Scaling scaling_from_string(std::string_view text) {
    if (text == "none") return Scaling::none;
    if (text == "minmax") return Scaling::minmax;
    fail(ErrorCode::parameter, "unknown scaling '" + std::string(text) + "'");
}

Balance balance_from_string(std::string_view text) {
    if (text == "none") return Balance::none;
    if (text == "undersample") return Balance::undersample;
    fail(ErrorCode::parameter, "unknown balance mode '" + std::string(text) + "'");
}

std::string format_double(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

double parse_double(std::string_view text) {
    double value = 0.0;
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
        fail(ErrorCode::parse, "not a number: '" + std::string(text) + "'");
    }
    return value;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".json");
    return p;
}

void save_dataset(const TabularDataset& data, const std::filesystem::path& csv_path) {
    if (data.targets.size() != data.rows() || data.split.size() != data.rows()) {
        fail(ErrorCode::shape, "dataset targets/split do not match its row count");
    }
    {
        std::ofstream out(csv_path);
        if (!out) {
            fail(ErrorCode::io, "cannot write " + csv_path.string());
        }
        for (std::size_t c = 0; c < data.cols(); ++c) {
            out << 'x' << c << ',';
        }
        out << "y\n";
        for (std::size_t r = 0; r < data.rows(); ++r) {
            for (std::size_t c = 0; c < data.cols(); ++c) {
                out << format_double(data.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)))
                    << ',';
            }
            out << format_double(data.targets[r]) << '\n';
        }
    }

    json side;
    side["format_version"] = kDatasetFormatVersion;
    side["function_id"] = data.function_id ? json(*data.function_id) : json(nullptr);
    side["m"] = data.predictive_indices.size();
    side["n"] = data.cols();
    side["predictive_indices"] = data.predictive_indices;
    side["noise_spec"] = data.noise ? noise_to_json(*data.noise) : json(nullptr);
    side["seed"] = data.noise ? json(data.noise->seed) : json(nullptr);
    side["split_ratio"] = data.split_ratio;
    side["task"] = std::string(to_string(data.task));
    side["validation_rows"] = data.validation_rows();
    side["feature_names"] = data.feature_names;

    std::ofstream out(sidecar_path(csv_path));
    if (!out) {
        fail(ErrorCode::io, "cannot write " + sidecar_path(csv_path).string());
    }
    out << side.dump(1) << '\n';
}

TabularDataset load_dataset(const std::filesystem::path& csv_path, AnnotationPolicy policy) {
    const auto side_path = sidecar_path(csv_path);
    const bool has_sidecar = std::filesystem::exists(side_path);
    if (!has_sidecar && policy == AnnotationPolicy::required) {
        fail(ErrorCode::missing_annotation, "no annotation sidecar " + side_path.string() + " for " +
                                                csv_path.string());
    }

    const CsvTable table = read_csv(csv_path);
    if (table.header.size() < 2) {
        fail(ErrorCode::schema_mismatch, csv_path.string() + ": need at least one feature column and a target");
    }
    const std::size_t n = table.header.size() - 1;
    TabularDataset data;
    data.features.resize(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(n));
    data.targets.resize(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            data.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = table.rows[r][c];
        }
        data.targets[r] = table.rows[r][n];
    }
    data.split.assign(table.rows.size(), Split::train);

    if (!has_sidecar) {
        data.task = is_binary(data.targets) ? Task::classification : Task::regression;
        return data;
    }

    std::ifstream in(side_path);
    json side;
    try {
        side = json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorCode::parse, side_path.string() + ": " + e.what());
    }
    try {
        const int version = side.at("format_version").get<int>();
        if (version != kDatasetFormatVersion) {
            fail(ErrorCode::version_mismatch, side_path.string() + ": format_version " + std::to_string(version) +
                                                  " is not supported");
        }
        if (side.at("n").get<std::size_t>() != n) {
            fail(ErrorCode::schema_mismatch, side_path.string() + ": sidecar describes " +
                                                 std::to_string(side.at("n").get<std::size_t>()) +
                                                 " features, CSV has " + std::to_string(n));
        }
        if (!side.at("function_id").is_null()) {
            data.function_id = side.at("function_id").get<int>();
        }
        data.predictive_indices = side.at("predictive_indices").get<std::vector<std::size_t>>();
        if (side.at("m").get<std::size_t>() != data.predictive_indices.size()) {
            fail(ErrorCode::schema_mismatch, side_path.string() + ": m does not match predictive_indices");
        }
        for (std::size_t i : data.predictive_indices) {
            if (i >= n) {
                fail(ErrorCode::schema_mismatch, side_path.string() + ": predictive index out of range");
            }
        }
        if (!side.at("noise_spec").is_null()) {
            data.noise = noise_from_json(side.at("noise_spec"));
        }
        data.split_ratio = side.at("split_ratio").get<double>();
        data.task = task_from_string(side.at("task").get<std::string>());
        for (std::size_t r : side.at("validation_rows").get<std::vector<std::size_t>>()) {
            if (r >= data.rows()) {
                fail(ErrorCode::schema_mismatch, side_path.string() + ": validation row out of range");
            }
            data.split[r] = Split::validation;
        }
        data.feature_names = side.at("feature_names").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        fail(ErrorCode::schema_mismatch, side_path.string() + ": " + e.what());
    }
    return data;
}

TabularDataset load_tabular_csv(const std::filesystem::path& path, const IngestOptions& options) {
    if (!(options.split_ratio > 0.0 && options.split_ratio < 1.0)) {
        fail(ErrorCode::parameter, "split ratio must lie in (0, 1)");
    }
    const CsvTable table = read_csv(path);
    std::size_t label = table.header.size() - 1;
    if (!options.label_column.empty()) {
        const auto it = std::find(table.header.begin(), table.header.end(), options.label_column);
        if (it == table.header.end()) {
            fail(ErrorCode::schema_mismatch, path.string() + ": no column named '" + options.label_column + "'");
        }
        label = static_cast<std::size_t>(it - table.header.begin());
    }
    if (table.header.size() < 2) {
        fail(ErrorCode::schema_mismatch, path.string() + ": need at least one feature column besides the label");
    }
    if (table.rows.empty()) {
        fail(ErrorCode::empty_data, path.string() + ": no data rows");
    }

    std::vector<double> labels(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        labels[r] = table.rows[r][label];
    }

    std::vector<std::size_t> keep(table.rows.size());
    std::iota(keep.begin(), keep.end(), std::size_t{0});
    Rng rng(options.seed);
    if (options.balance == Balance::undersample) {
        if (!is_binary(labels)) {
            fail(ErrorCode::invalid_target, "undersampling needs binary {0, 1} labels");
        }
        std::vector<std::size_t> zeros;
        std::vector<std::size_t> ones;
        for (std::size_t r : keep) {
            (labels[r] == 1.0 ? ones : zeros).push_back(r);
        }
        std::vector<std::size_t>& majority = zeros.size() >= ones.size() ? zeros : ones;
        const std::size_t minority_count = std::min(zeros.size(), ones.size());
        std::shuffle(majority.begin(), majority.end(), rng);
        majority.resize(minority_count);
        keep.clear();
        keep.insert(keep.end(), zeros.begin(), zeros.end());
        keep.insert(keep.end(), ones.begin(), ones.end());
        std::sort(keep.begin(), keep.end());
    }

    TabularDataset data;
    const std::size_t n = table.header.size() - 1;
    data.features.resize(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(n));
    data.targets.resize(keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
        std::size_t out_c = 0;
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            if (c == label) {
                continue;
            }
            data.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(out_c++)) = table.rows[keep[r]][c];
        }
        data.targets[r] = labels[keep[r]];
    }
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c != label) {
            data.feature_names.push_back(table.header[c]);
        }
    }
    data.task = is_binary(data.targets) ? Task::classification : Task::regression;
    data.split_ratio = options.split_ratio;
    data.split = assign_split(data.rows(), options.split_ratio, derive_seed(options.seed, "split"));

    if (options.scaling == Scaling::minmax) {
        const auto train = data.train_rows();
        for (Eigen::Index c = 0; c < data.features.cols(); ++c) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -std::numeric_limits<double>::infinity();
            for (std::size_t r : train) {
                const double v = data.features(static_cast<Eigen::Index>(r), c);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            const double range = hi - lo;
            for (Eigen::Index r = 0; r < data.features.rows(); ++r) {
                double& v = data.features(r, c);
                v = range > 0.0 ? (v - lo) / range : 0.0;
            }
        }
    }
    return data;
}

void write_attribution_header(std::ostream& out) {
    out << "sample_id,method,feature_index,value\n";
}

void write_attribution_rows(std::ostream& out, std::size_t sample_id, const attribution::AttributionVector& attrib) {
    for (std::size_t i = 0; i < attrib.values.size(); ++i) {
        out << sample_id << ',' << attribution::to_string(attrib.method) << ',' << i << ','
            << format_double(attrib.values[i]) << '\n';
    }
}

}  // namespace snrbench::bench
