#pragma once

// Score functions T : X x Y -> R. The test's validity holds for any fixed
// deterministic score, so besides the three built-ins used by the theory
// (absolute linear residual, classification margin, squared residual) a
// caller-provided callback is accepted unchanged.

#include <cmath>
#include <fstream>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace swaptest {

namespace detail {
inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline void require_dim(std::span<const double> theta, std::span<const double> x) {
    if (theta.size() != x.size()) {
        throw std::invalid_argument("score: model estimate has dimension " +
                                    std::to_string(theta.size()) + " but features have " +
                                    std::to_string(x.size()));
    }
}
}  // namespace detail

/// |y - <x, theta_hat>|
inline double eval_linear_residual(std::span<const double> theta_hat,
                                   std::span<const double> x, double y) {
    detail::require_dim(theta_hat, x);
    return std::abs(y - detail::dot(x, theta_hat));
}

/// y * <x, theta_hat> with y restricted to {-1, +1}.
inline double eval_classification_margin(std::span<const double> theta_hat,
                                         std::span<const double> x, double y) {
    detail::require_dim(theta_hat, x);
    if (y != 1.0 && y != -1.0) {
        throw std::invalid_argument("classification margin: response must be -1 or +1");
    }
    return y * detail::dot(x, theta_hat);
}

/// (y - <x, theta_hat>)^2
inline double eval_squared_residual(std::span<const double> theta_hat,
                                    std::span<const double> x, double y) {
    detail::require_dim(theta_hat, x);
    const double r = y - detail::dot(x, theta_hat);
    return r * r;
}

/// Coefficient vectors (model estimates, true coefficients, mixture means)
/// are accepted either as an inline JSON array ("[1,2,3]") or as a path to a
/// single-column CSV with an optional header line.
inline std::vector<double> load_coefficients(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t");
    if (first != std::string::npos && arg[first] == '[') {
        return nlohmann::json::parse(arg).get<std::vector<double>>();
    }
    std::ifstream in(arg);
    if (!in) throw std::runtime_error("cannot open vector file '" + arg + "'");
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            std::size_t pos = 0;
            const double v = std::stod(line, &pos);
            if (pos != line.size()) throw std::invalid_argument("trailing garbage");
            values.push_back(v);
        } catch (const std::exception&) {
            if (line_no == 1 && values.empty()) continue;  // header
            throw std::runtime_error("vector file '" + arg + "' line " +
                                     std::to_string(line_no) + ": '" + line +
                                     "' is not a number");
        }
    }
    if (values.empty()) throw std::runtime_error("vector file '" + arg + "' has no values");
    return values;
}

/// Config fields: a JSON array, or a string holding a CSV path.
inline std::vector<double> coefficients_from_json(const nlohmann::json& j) {
    if (j.is_string()) return load_coefficients(j.get<std::string>());
    return j.get<std::vector<double>>();
}

enum class ScoreKind { LinearResidual, ClassificationMargin, SquaredResidual, Custom };

inline std::string to_string(ScoreKind kind) {
    switch (kind) {
        case ScoreKind::LinearResidual: return "linear-residual";
        case ScoreKind::ClassificationMargin: return "classification-margin";
        case ScoreKind::SquaredResidual: return "squared-residual";
        case ScoreKind::Custom: return "custom";
    }
    return "unknown";
}

class ScoreFunction {
  public:
    using Callback = std::function<double(std::span<const double>, double)>;

    static ScoreFunction linear_residual(std::vector<double> theta_hat) {
        return ScoreFunction(ScoreKind::LinearResidual, std::move(theta_hat));
    }
    static ScoreFunction classification_margin(std::vector<double> theta_hat) {
        return ScoreFunction(ScoreKind::ClassificationMargin, std::move(theta_hat));
    }
    static ScoreFunction squared_residual(std::vector<double> theta_hat) {
        return ScoreFunction(ScoreKind::SquaredResidual, std::move(theta_hat));
    }
    static ScoreFunction custom(Callback fn) {
        ScoreFunction s(ScoreKind::Custom, {});
        s.callback_ = std::move(fn);
        return s;
    }

    static ScoreFunction make(ScoreKind kind, std::vector<double> theta_hat) {
        if (kind == ScoreKind::Custom) {
            throw std::invalid_argument("ScoreFunction::make: custom scores need a callback");
        }
        return ScoreFunction(kind, std::move(theta_hat));
    }

    double operator()(std::span<const double> x, double y) const {
        switch (kind_) {
            case ScoreKind::LinearResidual: return eval_linear_residual(theta_hat_, x, y);
            case ScoreKind::ClassificationMargin:
                return eval_classification_margin(theta_hat_, x, y);
            case ScoreKind::SquaredResidual: return eval_squared_residual(theta_hat_, x, y);
            case ScoreKind::Custom: return callback_(x, y);
        }
        throw std::logic_error("ScoreFunction: unreachable");
    }

    ScoreKind kind() const { return kind_; }
    const std::vector<double>& theta_hat() const { return theta_hat_; }

  private:
    ScoreFunction(ScoreKind kind, std::vector<double> theta_hat)
        : kind_(kind), theta_hat_(std::move(theta_hat)) {
        for (double v : theta_hat_) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("ScoreFunction: non-finite model estimate");
            }
        }
    }

    ScoreKind kind_;
    std::vector<double> theta_hat_;
    Callback callback_;
};

}  // namespace swaptest
