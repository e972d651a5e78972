#pragma once

// Data model for labeled datasets, the coordinate-swap primitive, and the
// half/half pairing used by the swap statistic. All types are immutable
// after construction; every operation here is a pure function.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "swaptest/rng.hpp"

namespace swaptest {

struct FeaturePair {
    std::size_t i = 0;
    std::size_t j = 0;

    bool degenerate() const { return i == j; }

    void validate(std::size_t dim) const {
        if (i >= dim || j >= dim) {
            throw std::invalid_argument("FeaturePair: index out of range for dimension " +
                                        std::to_string(dim));
        }
    }
};

/// n feature rows in R^d with scalar responses. Entries are validated to be
/// finite on construction; d >= 2 so that feature pairs are meaningful.
class Dataset {
  public:
    Dataset(std::vector<double> features, std::vector<double> responses, std::size_t dim)
        : features_(std::move(features)), responses_(std::move(responses)), dim_(dim) {
        if (dim_ < 2) throw std::invalid_argument("Dataset: dimension must be >= 2");
        if (responses_.empty()) throw std::invalid_argument("Dataset: no records");
        if (features_.size() != responses_.size() * dim_) {
            throw std::invalid_argument("Dataset: feature buffer does not match n*d");
        }
        for (double v : features_) {
            if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite feature");
        }
        for (double v : responses_) {
            if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite response");
        }
    }

    std::size_t size() const { return responses_.size(); }
    std::size_t dim() const { return dim_; }

    std::span<const double> row(std::size_t r) const {
        return {features_.data() + r * dim_, dim_};
    }
    double response(std::size_t r) const { return responses_[r]; }

    const std::vector<double>& features() const { return features_; }
    const std::vector<double>& responses() const { return responses_; }

    /// First n records (used for nested-sample experiments).
    Dataset head(std::size_t n) const {
        if (n == 0 || n > size()) throw std::invalid_argument("Dataset::head: bad count");
        return Dataset(std::vector<double>(features_.begin(), features_.begin() + n * dim_),
                       std::vector<double>(responses_.begin(), responses_.begin() + n), dim_);
    }

  private:
    std::vector<double> features_;
    std::vector<double> responses_;
    std::size_t dim_;
};

/// Returns x with entries i and j exchanged; all other entries bit-identical.
inline std::vector<double> swap_coordinates(std::span<const double> x, std::size_t i,
                                            std::size_t j) {
    if (i >= x.size() || j >= x.size()) {
        throw std::invalid_argument("swap_coordinates: index out of range");
    }
    std::vector<double> out(x.begin(), x.end());
    std::swap(out[i], out[j]);
    return out;
}

inline std::vector<double> swap_coordinates(const std::vector<double>& x, std::size_t i,
                                            std::size_t j) {
    return swap_coordinates(std::span<const double>(x), i, j);
}

/// First half of a dataset verbatim, second half with the pair's coordinates
/// exchanged. An odd trailing record is dropped.
class PairedDataset {
  public:
    PairedDataset(std::vector<double> orig_features, std::vector<double> orig_responses,
                  std::vector<double> swap_features, std::vector<double> swap_responses,
                  std::size_t dim)
        : orig_features_(std::move(orig_features)),
          orig_responses_(std::move(orig_responses)),
          swap_features_(std::move(swap_features)),
          swap_responses_(std::move(swap_responses)),
          dim_(dim) {
        if (orig_responses_.size() != swap_responses_.size()) {
            throw std::invalid_argument("PairedDataset: halves differ in length");
        }
    }

    std::size_t pairs() const { return orig_responses_.size(); }
    std::size_t dim() const { return dim_; }

    std::span<const double> original_row(std::size_t m) const {
        return {orig_features_.data() + m * dim_, dim_};
    }
    std::span<const double> swapped_row(std::size_t m) const {
        return {swap_features_.data() + m * dim_, dim_};
    }
    double original_response(std::size_t m) const { return orig_responses_[m]; }
    double swapped_response(std::size_t m) const { return swap_responses_[m]; }

  private:
    std::vector<double> orig_features_;
    std::vector<double> orig_responses_;
    std::vector<double> swap_features_;
    std::vector<double> swap_responses_;
    std::size_t dim_;
};

/// Deterministic (m, m + n/2) pairing: records 0..n/2-1 stay as-is, records
/// n/2..n-1 get coordinates i and j exchanged. If n is odd the last record
/// is dropped first.
inline PairedDataset split_pairs(const Dataset& data, const FeaturePair& pair) {
    pair.validate(data.dim());
    if (data.size() < 2) throw std::invalid_argument("split_pairs: need at least 2 records");
    const std::size_t n_used = data.size() - (data.size() % 2);
    const std::size_t m = n_used / 2;
    const std::size_t d = data.dim();

    std::vector<double> orig_features(data.features().begin(),
                                      data.features().begin() + m * d);
    std::vector<double> orig_responses(data.responses().begin(),
                                       data.responses().begin() + m);
    std::vector<double> swap_features(data.features().begin() + m * d,
                                      data.features().begin() + 2 * m * d);
    std::vector<double> swap_responses(data.responses().begin() + m,
                                       data.responses().begin() + 2 * m);
    if (!pair.degenerate()) {
        for (std::size_t r = 0; r < m; ++r) {
            std::swap(swap_features[r * d + pair.i], swap_features[r * d + pair.j]);
        }
    }
    return PairedDataset(std::move(orig_features), std::move(orig_responses),
                         std::move(swap_features), std::move(swap_responses), d);
}

/// Seeded Fisher-Yates permutation of whole records. Optional preprocessing
/// for callers that want to destroy accidental row ordering before the
/// deterministic split; under i.i.d. rows the unshuffled split is already
/// valid.
inline Dataset shuffle_rows(const Dataset& data, std::uint64_t seed) {
    const std::size_t n = data.size();
    const std::size_t d = data.dim();
    std::vector<std::size_t> perm(n);
    for (std::size_t r = 0; r < n; ++r) perm[r] = r;
    Rng rng(derive_seed(seed, {stream::kShuffle}));
    for (std::size_t r = n; r-- > 1;) {
        std::swap(perm[r], perm[rng.below(r + 1)]);
    }
    std::vector<double> features(n * d);
    std::vector<double> responses(n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto src = data.row(perm[r]);
        std::copy(src.begin(), src.end(), features.begin() + r * d);
        responses[r] = data.response(perm[r]);
    }
    return Dataset(std::move(features), std::move(responses), d);
}

// --------------------------------------------------------------------------
// CSV ingestion. Schema: header "x1,...,xd,y", one record per line, decimal
// reals. Parse failures name the offending line.
// --------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

inline double parse_real(const std::string& field, std::size_t line_no) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error("CSV parse error at line " + std::to_string(line_no) +
                                 ": '" + field + "' is not a number");
    }
    while (pos < field.size() && (field[pos] == ' ' || field[pos] == '\t')) ++pos;
    if (pos != field.size()) {
        throw std::runtime_error("CSV parse error at line " + std::to_string(line_no) +
                                 ": trailing garbage in '" + field + "'");
    }
    return value;
}

}  // namespace detail

inline Dataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("CSV parse error at line 1: empty input");
    const auto header = detail::split_csv_line(line);
    if (header.size() < 3 || header.back() != "y") {
        throw std::runtime_error("CSV parse error at line 1: expected header x1,...,xd,y");
    }
    const std::size_t d = header.size() - 1;
    for (std::size_t c = 0; c < d; ++c) {
        if (header[c] != "x" + std::to_string(c + 1)) {
            throw std::runtime_error("CSV parse error at line 1: expected column x" +
                                     std::to_string(c + 1) + ", got '" + header[c] + "'");
        }
    }

    std::vector<double> features;
    std::vector<double> responses;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != d + 1) {
            throw std::runtime_error("CSV parse error at line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(d + 1) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < d; ++c) {
            features.push_back(detail::parse_real(fields[c], line_no));
        }
        responses.push_back(detail::parse_real(fields[d], line_no));
    }
    if (responses.empty()) throw std::runtime_error("CSV parse error: no data records");
    return Dataset(std::move(features), std::move(responses), d);
}

inline void write_dataset_csv(std::ostream& out, const Dataset& data) {
    for (std::size_t c = 0; c < data.dim(); ++c) out << 'x' << (c + 1) << ',';
    out << "y\n";
    out.precision(17);
    for (std::size_t r = 0; r < data.size(); ++r) {
        const auto x = data.row(r);
        for (double v : x) out << v << ',';
        out << data.response(r) << '\n';
    }
}

}  // namespace swaptest
