#include "stackkit/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "stackkit/rng.hpp"
#include "stackkit/text_format.hpp"

namespace stackkit {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double clamp01(double v) { return std::min(std::max(v, 0.0), 1.0); }

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

}  // namespace

double OraclePredictor::predict(const Stack& stack) const { return oracle_predict(stack); }

double oracle_predict(const Stack& stack) {
    return check_stability(stack, 0.0).stable ? 1.0 : 0.0;
}

NoisyOraclePredictor::NoisyOraclePredictor(double sigma, std::uint64_t seed)
    : sigma_(sigma), counter_(0), seed_(seed) {}

double NoisyOraclePredictor::predict(const Stack& stack) const {
    return noisy_predict(stack, sigma_, mix_seed(seed_, counter_++));
}

double noisy_predict(const Stack& stack, double sigma_score, std::uint64_t seed) {
    const double base = oracle_predict(stack);
    if (sigma_score <= 0.0) return base;
    Rng rng(mix_seed(seed, 0x5c02e501ull));
    return clamp01(base + sigma_score * rng.normal());
}

std::vector<double> extract_features(const Stack& stack, const FeatureConfig& config,
                                     std::uint64_t seed) {
    const int n = stack.height();
    if (n - 1 > config.max_interfaces) {
        throw std::invalid_argument("stack taller than the feature window");
    }

    Stack observed = stack;
    if (config.sigma_obs > 0.0) {
        Rng rng(mix_seed(seed, 0x0b5e12ull));
        for (PlacedObject& obj : observed.objects) {
            obj.offset.x += config.sigma_obs * rng.normal();
            obj.offset.y += config.sigma_obs * rng.normal();
        }
    }

    struct InterfaceFeatures {
        double margin = 0.0;
        double norm_margin = 0.0;
        double area = 0.0;
        double degenerate = 0.0;
        int index = 0;
    };
    std::vector<InterfaceFeatures> rows;
    rows.reserve(std::max(n - 1, 0));

    double m_acc = 0.0, mx = 0.0, my = 0.0;
    for (int i = n - 2; i >= 0; --i) {
        const PlacedObject& lower = observed.objects[i];
        const PlacedObject& upper = observed.objects[i + 1];
        const double m = upper.mass();
        const Vec3 r = upper.centroid();
        m_acc += m;
        mx += m * r.x;
        my += m * r.y;
        const Vec2 com{mx / m_acc, my / m_acc};

        InterfaceFeatures row;
        row.index = i;
        row.degenerate = (!lower.top_flat() || !upper.bottom_flat()) ? 1.0 : 0.0;
        if (row.degenerate == 0.0) {
            const Footprint sup = faces(lower).top;
            const Footprint bot = faces(upper).bottom;
            row.margin = planar_margin(sup, bot, com);
            const double extent = (sup.inradius() + bot.inradius()) / 2.0;
            row.norm_margin = row.margin / extent;
            row.area = intersection_area(sup, bot);
        }
        rows.push_back(row);
    }

    // Salience order: the binding (smallest-margin) interface first, padding
    // last, so the stability criterion stays linearly decodable.
    std::sort(rows.begin(), rows.end(), [](const InterfaceFeatures& a, const InterfaceFeatures& b) {
        if (a.margin != b.margin) return a.margin < b.margin;
        return a.index < b.index;
    });

    const int fcount = static_cast<int>(config.features.size());
    std::vector<double> phi(config.dimension(), 0.0);
    for (std::size_t slot = 0; slot < rows.size(); ++slot) {
        for (int f = 0; f < fcount; ++f) {
            const std::string& name = config.features[f];
            double value = 0.0;
            if (name == "margin") value = rows[slot].margin;
            else if (name == "norm_margin") value = rows[slot].norm_margin;
            else if (name == "area") value = rows[slot].area;
            else if (name == "degenerate") value = rows[slot].degenerate;
            else throw std::invalid_argument("unknown feature: " + name);
            phi[slot * fcount + f] = value;
        }
    }
    return phi;
}

double LogisticModel::logit(const std::vector<double>& phi) const {
    double z = bias;
    for (std::size_t i = 0; i < weights.size() && i < phi.size(); ++i) z += weights[i] * phi[i];
    return z;
}

double LogisticModel::predict_stable(const std::vector<double>& phi) const {
    return 1.0 - sigmoid(logit(phi));
}

double logistic_loss(const std::vector<double>& weights, double bias,
                     const std::vector<std::vector<double>>& xs,
                     const std::vector<int>& unstable_labels, double l2) {
    double loss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double f = bias;
        for (std::size_t j = 0; j < weights.size(); ++j) f += weights[j] * xs[i][j];
        loss += softplus(-f) + (1.0 - unstable_labels[i]) * f;
    }
    double w2 = 0.0;
    for (const double w : weights) w2 += w * w;
    return loss + 0.5 * l2 * w2;
}

double logistic_loss_gradient(const std::vector<double>& weights, double bias,
                              const std::vector<std::vector<double>>& xs,
                              const std::vector<int>& unstable_labels, double l2,
                              std::vector<double>& grad_w) {
    grad_w.assign(weights.size(), 0.0);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double f = bias;
        for (std::size_t j = 0; j < weights.size(); ++j) f += weights[j] * xs[i][j];
        const double err = sigmoid(f) - unstable_labels[i];
        for (std::size_t j = 0; j < weights.size(); ++j) grad_w[j] += err * xs[i][j];
        grad_b += err;
    }
    for (std::size_t j = 0; j < weights.size(); ++j) grad_w[j] += l2 * weights[j];
    return grad_b;
}

TrainResult train_logistic(const std::vector<std::vector<double>>& xs,
                           const std::vector<int>& stable_labels, const FeatureConfig& config,
                           const TrainHyper& hyper) {
    if (xs.empty() || xs.size() != stable_labels.size()) {
        throw DegenerateDatasetError("empty or inconsistent training set");
    }
    const int n_stable = std::accumulate(stable_labels.begin(), stable_labels.end(), 0);
    if (n_stable == 0 || n_stable == static_cast<int>(stable_labels.size())) {
        throw DegenerateDatasetError("training set contains a single class");
    }

    std::vector<int> y(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) y[i] = 1 - stable_labels[i];

    TrainResult result;
    result.model.feature_config = config;
    result.model.weights.assign(xs.front().size(), 0.0);
    result.model.bias = 0.0;
    result.loss_trace.push_back(
        logistic_loss(result.model.weights, result.model.bias, xs, y, hyper.l2));

    Rng rng(mix_seed(hyper.seed, 0x7a41ull));
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    const int batch = std::max(1, hyper.batch);

    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        // Fisher-Yates with the deterministic stream.
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            std::swap(order[i], order[rng.uniform_int(0, static_cast<int>(i))]);
        }
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t stop = std::min(order.size(), start + batch);
            std::vector<double> gw(result.model.weights.size(), 0.0);
            double gb = 0.0;
            for (std::size_t k = start; k < stop; ++k) {
                const std::size_t i = order[k];
                double f = result.model.bias;
                for (std::size_t j = 0; j < gw.size(); ++j) {
                    f += result.model.weights[j] * xs[i][j];
                }
                const double err = sigmoid(f) - y[i];
                for (std::size_t j = 0; j < gw.size(); ++j) gw[j] += err * xs[i][j];
                gb += err;
            }
            const double inv = 1.0 / static_cast<double>(stop - start);
            for (std::size_t j = 0; j < gw.size(); ++j) {
                result.model.weights[j] -=
                    hyper.lr * (gw[j] * inv + hyper.l2 * result.model.weights[j]);
            }
            result.model.bias -= hyper.lr * gb * inv;
        }
        result.loss_trace.push_back(
            logistic_loss(result.model.weights, result.model.bias, xs, y, hyper.l2));
    }
    return result;
}

std::string serialize_model(const LogisticModel& model) {
    KeyValueDoc doc;
    doc.add("stackkit-model", "");
    doc.add_int("schema_version", 1);
    doc.add_double("sigma_obs", model.feature_config.sigma_obs);
    doc.add_int("max_interfaces", model.feature_config.max_interfaces);
    std::string features;
    for (const std::string& f : model.feature_config.features) {
        if (!features.empty()) features += ' ';
        features += f;
    }
    doc.add("features", features);
    doc.add_int("dimension", static_cast<long long>(model.weights.size()));
    doc.add_double("bias", model.bias);
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
        doc.add_double("weight." + std::to_string(i), model.weights[i]);
    }
    return doc.serialize();
}

LogisticModel parse_model(std::string_view text) {
    const KeyValueDoc doc = KeyValueDoc::parse(text);
    if (doc.entries().empty() || doc.entries().front().first != "stackkit-model") {
        throw SchemaError("not a model file");
    }
    if (doc.get_int("schema_version") != 1) throw SchemaError("unknown model schema version");
    LogisticModel model;
    model.feature_config.sigma_obs = doc.get_double("sigma_obs");
    model.feature_config.max_interfaces = static_cast<int>(doc.get_int("max_interfaces"));
    model.feature_config.features.clear();
    {
        std::string token;
        const std::string& all = doc.get("features");
        std::size_t pos = 0;
        while (pos < all.size()) {
            std::size_t sep = all.find(' ', pos);
            if (sep == std::string::npos) sep = all.size();
            model.feature_config.features.push_back(all.substr(pos, sep - pos));
            pos = sep + 1;
        }
    }
    const long long dim = doc.get_int("dimension");
    model.bias = doc.get_double("bias");
    model.weights.resize(dim);
    for (long long i = 0; i < dim; ++i) {
        model.weights[i] = doc.get_double("weight." + std::to_string(i));
    }
    return model;
}

void save_model(const LogisticModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    const std::string bytes = serialize_model(model);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to '" + path.string() + "'");
}

LogisticModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

LogisticPredictor::LogisticPredictor(LogisticModel model, std::uint64_t seed)
    : model_(std::move(model)), seed_(seed), counter_(0) {}

double LogisticPredictor::predict(const Stack& stack) const {
    const int window = model_.feature_config.max_interfaces + 1;
    const std::uint64_t call_seed = mix_seed(seed_, counter_++);
    if (stack.height() <= window) {
        return model_.predict_stable(extract_features(stack, model_.feature_config, call_seed));
    }
    Stack top_window;
    top_window.objects.assign(stack.objects.end() - window, stack.objects.end());
    return model_.predict_stable(
        extract_features(top_window, model_.feature_config, call_seed));
}

}  // namespace stackkit
