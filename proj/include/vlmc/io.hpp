#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vlmc/bounds.hpp"
#include "vlmc/context_tree.hpp"
#include "vlmc/estimator.hpp"
#include "vlmc/sample.hpp"

namespace vlmc {

using nlohmann::json;

// Non-finite values are written as strings; JSON has no literal for them.
inline json json_number(double x) {
    if (std::isfinite(x)) return json(x);
    if (std::isnan(x)) return json("nan");
    return json(x > 0 ? "inf" : "-inf");
}

inline double number_from_json(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        return std::numeric_limits<double>::quiet_NaN();
    }
    return j.get<double>();
}

inline std::string format_17g(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Tree files
// ---------------------------------------------------------------------------

inline json tree_to_json(const ContextTree& tree) {
    json contexts = json::array();
    for (const auto& c : tree.contexts) {
        json entry;
        entry["context"] = json::array();
        for (Symbol s : c.context) entry["context"].push_back(static_cast<int>(s));
        entry["probs"] = c.probs;
        contexts.push_back(std::move(entry));
    }
    return json{{"alphabet_size", tree.alphabet_size}, {"contexts", contexts}};
}

inline ContextTree tree_from_json(const json& j) {
    if (!j.contains("alphabet_size") || !j.contains("contexts"))
        throw InvalidTree("tree file must carry 'alphabet_size' and 'contexts'");
    const int alphabet = j.at("alphabet_size").get<int>();
    std::vector<ContextEntry> entries;
    for (const auto& e : j.at("contexts")) {
        ContextEntry entry;
        for (const auto& s : e.at("context")) {
            const int v = s.get<int>();
            if (v < 0 || v >= alphabet)
                throw InvalidTree("tree rejected: context symbol " +
                                  std::to_string(v) + " outside the alphabet");
            entry.context.push_back(static_cast<Symbol>(v));
        }
        entry.probs = e.at("probs").get<std::vector<double>>();
        entries.push_back(std::move(entry));
    }
    return ContextTree::create(alphabet, std::move(entries));
}

inline ContextTree load_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open tree file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("cannot parse tree file '" + path + "': " + e.what());
    }
    return tree_from_json(j);
}

inline void save_tree(const ContextTree& tree, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write tree file '" + path + "'");
    out << tree_to_json(tree).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Sample files: whitespace-separated base-10 symbols, nothing else.
// ---------------------------------------------------------------------------

inline void save_sample(const Sample& sample, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write sample file '" + path + "'");
    for (std::size_t i = 0; i < sample.n(); ++i) {
        if (i) out << (i % 64 == 0 ? '\n' : ' ');
        out << static_cast<int>(sample.symbols[i]);
    }
    out << '\n';
}

// The alphabet is not part of the format; it is inferred as the smallest
// binary-or-larger alphabet covering the observed symbols.
inline Sample load_sample(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open sample file '" + path + "'");
    Sample sample{2, {}};
    long long v = 0;
    int max_symbol = 1;
    while (in >> v) {
        if (v < 0 || v > 255)
            throw Error("sample file '" + path + "' holds symbol " +
                        std::to_string(v) + " outside [0,255]");
        max_symbol = std::max(max_symbol, static_cast<int>(v));
        sample.symbols.push_back(static_cast<Symbol>(v));
    }
    if (!in.eof())
        throw Error("sample file '" + path + "' holds non-numeric content");
    sample.alphabet_size = max_symbol + 1;
    return sample;
}

// ---------------------------------------------------------------------------
// Estimated-tree files: tree format minus probs, plus a meta block.
// ---------------------------------------------------------------------------

struct EstimateMeta {
    double delta = 0.0;
    int d = 0;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
};

inline json estimated_tree_to_json(const EstimatedTree& est,
                                   const EstimateMeta& meta) {
    json contexts = json::array();
    for (const auto& w : est.strings) {
        json entry;
        entry["context"] = json::array();
        for (Symbol s : w) entry["context"].push_back(static_cast<int>(s));
        contexts.push_back(std::move(entry));
    }
    return json{{"alphabet_size", est.alphabet_size},
                {"contexts", contexts},
                {"meta",
                 {{"delta", meta.delta},
                  {"d", meta.d},
                  {"n", meta.n},
                  {"seed", meta.seed}}}};
}

inline void save_estimated_tree(const EstimatedTree& est, const EstimateMeta& meta,
                                const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write estimated-tree file '" + path + "'");
    out << estimated_tree_to_json(est, meta).dump(2) << '\n';
}

inline EstimatedTree load_estimated_tree(const std::string& path,
                                         EstimateMeta* meta = nullptr) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open estimated-tree file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("cannot parse estimated-tree file '" + path + "': " + e.what());
    }
    EstimatedTree est;
    est.alphabet_size = j.at("alphabet_size").get<int>();
    for (const auto& e : j.at("contexts")) {
        Word w;
        for (const auto& s : e.at("context"))
            w.push_back(static_cast<Symbol>(s.get<int>()));
        est.strings.insert(std::move(w));
    }
    if (meta && j.contains("meta")) {
        meta->delta = j["meta"].at("delta").get<double>();
        meta->d = j["meta"].at("d").get<int>();
        meta->n = j["meta"].at("n").get<std::uint64_t>();
        meta->seed = j["meta"].at("seed").get<std::uint64_t>();
    }
    return est;
}

// ---------------------------------------------------------------------------
// Bounds reports: one flat object per configuration.
// ---------------------------------------------------------------------------

inline json bounds_report_to_json(const BoundsReport& rep) {
    json j;
    j["alpha_X"] = json_number(rep.alpha_X);
    j["beta_X"] = json_number(rep.beta_X);
    j["beta_star_X"] = json_number(rep.beta_star_X);
    if (rep.alpha_Y) j["alpha_Y"] = json_number(*rep.alpha_Y);
    if (rep.beta_Y) j["beta_Y"] = json_number(*rep.beta_Y);
    if (rep.beta_star_min) j["beta_star_min"] = json_number(*rep.beta_star_min);
    j["k1"] = json_number(rep.k1);
    j["k2"] = json_number(rep.k2);
    j["k3"] = json_number(rep.k3);
    j["c1"] = json_number(rep.c1);
    j["c2"] = json_number(rep.c2);
    j["c3"] = json_number(rep.c3);
    j["d"] = rep.d;
    j["n0"] = json_number(rep.n0);
    j["k_bar"] = json_number(rep.k_bar);
    j["D_d"] = json_number(rep.D_d);
    j["delta_window_low"] = json_number(rep.delta_low);
    j["delta_window_high"] = json_number(rep.delta_high);
    j["valid"] = rep.valid;
    j["reason"] = rep.reason;
    j["eps"] = json_number(rep.eps);
    j["delta"] = json_number(rep.delta);
    j["n"] = rep.n;
    j["K"] = rep.K;
    j["prob_bound"] = json_number(rep.prob_bound);
    j["prob_vacuous"] = rep.prob_vacuous;
    j["n_above_threshold"] = rep.n_above_threshold;
    if (rep.beta_alpha_max) j["beta_alpha_max"] = json_number(*rep.beta_alpha_max);
    if (rep.beta_alpha_min_variant)
        j["beta_alpha_min_variant"] = json_number(*rep.beta_alpha_min_variant);
    return j;
}

inline void save_bounds_reports(const std::vector<BoundsReport>& reports,
                                const std::string& path) {
    json rows = json::array();
    for (const auto& r : reports) rows.push_back(bounds_report_to_json(r));
    std::ofstream out(path);
    if (!out) throw Error("cannot write report file '" + path + "'");
    out << rows.dump(2) << '\n';
}

}  // namespace vlmc
