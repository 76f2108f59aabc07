#include "nidsgnn/harness/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "nidsgnn/classify/tree.hpp"
#include "nidsgnn/dataio/sampling.hpp"
#include "nidsgnn/encoder/checkpoint.hpp"

namespace nidsgnn::harness {

using nlohmann::json;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace {

bool is_ssl(Variant v) { return v == Variant::D_SSL || v == Variant::T_SSL; }

}  // namespace

dataio::Encoding variant_encoding(const ExperimentConfig& cfg, Variant v) {
    switch (v) {
        case Variant::D:
        case Variant::D_SSL: return dataio::Encoding::onehot;
        case Variant::T:
        case Variant::T_SSL: return dataio::Encoding::target;
        case Variant::DT: return cfg.dt_encoding;
    }
    return dataio::Encoding::onehot;
}

encoder::ModelConfig make_model_config(const ExperimentConfig& cfg,
                                       const Workspace& ws, Variant v) {
    encoder::ModelConfig mc;
    mc.mode = (v == Variant::D || v == Variant::D_SSL) ? encoder::FrontEndMode::dense
                                                      : encoder::FrontEndMode::target;
    if (mc.mode == encoder::FrontEndMode::dense) {
        mc.numeric_width = ws.prep.numeric_width();
        mc.categorical_width = ws.prep.onehot_width() - ws.prep.numeric_width();
    } else {
        mc.numeric_width = ws.prep.numeric_width();
        mc.categorical_width = ws.prep.target_width() - ws.prep.numeric_width();
    }
    mc.d_emb = cfg.d_emb;
    mc.d_e = cfg.d_e;
    mc.layers = cfg.layers;
    mc.d_x = cfg.d_x;
    mc.node_feat_width = cfg.node_feat_width;
    mc.aggregator = cfg.aggregator;
    mc.n_classes = ws.n_classes;
    return mc;
}

namespace {

Aggregate aggregate_of(std::vector<double> xs) {
    Aggregate a;
    if (xs.empty()) return a;
    std::sort(xs.begin(), xs.end());
    double s = 0.0;
    for (double x : xs) s += x;
    a.mean = s / double(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - a.mean) * (x - a.mean);
    a.stddev = xs.size() > 1 ? std::sqrt(ss / double(xs.size() - 1)) : 0.0;
    a.min = xs.front();
    a.max = xs.back();
    auto quantile = [&](double q) {
        const double pos = q * double(xs.size() - 1);
        const std::size_t lo = std::size_t(pos);
        const double frac = pos - double(lo);
        return lo + 1 < xs.size() ? xs[lo] * (1.0 - frac) + xs[lo + 1] * frac : xs[lo];
    };
    a.q1 = quantile(0.25);
    a.median = quantile(0.5);
    a.q3 = quantile(0.75);
    return a;
}

}  // namespace

void ResultsTable::recompute_aggregates() {
    aggregates.clear();
    std::map<std::pair<std::string, std::size_t>, std::vector<double>> buckets;
    for (const auto& t : trials)
        buckets[{variant_name(t.variant), t.n_labels}].push_back(t.metrics.weighted_f1);
    for (auto& [key, xs] : buckets) aggregates[key] = aggregate_of(xs);
}

Workspace Workspace::prepare(const ExperimentConfig& cfg) {
    cfg.validate();
    Workspace ws;
    std::set<std::string> allowlist;
    if (cfg.synthetic) {
        ws.schema = dataio::synthetic_schema();
        ws.train = dataio::gen_synthetic(*cfg.synthetic);
        dataio::SyntheticConfig test_cfg = *cfg.synthetic;
        test_cfg.n_flows = cfg.synthetic_test_flows;
        test_cfg.seed = mix_seed(cfg.synthetic->seed, 9001);
        ws.test = dataio::gen_synthetic(test_cfg);
        allowlist = cfg.allowlist_path.empty()
                        ? dataio::FittedPreprocessor::parse_allowlist(
                              dataio::synthetic_allowlist_text())
                        : dataio::FittedPreprocessor::load_allowlist(cfg.allowlist_path);
    } else {
        ws.schema = dataio::FeatureSchema::load(cfg.schema_path);
        ws.train = dataio::load_csv(cfg.train_csv, ws.schema);
        ws.test = dataio::load_csv(cfg.test_csv, ws.schema);
        if (!cfg.allowlist_path.empty())
            allowlist = dataio::FittedPreprocessor::load_allowlist(cfg.allowlist_path);
    }
    ws.prep = dataio::FittedPreprocessor::fit(ws.train, ws.schema, std::move(allowlist));
    std::uint32_t mx = 0;
    for (std::size_t r = 0; r < ws.train.size(); ++r)
        mx = std::max(mx, ws.train.label_of(r, ws.schema));
    ws.n_classes = mx + 1;
    ws.config_digest = cfg.digest();
    return ws;
}

TrialResult run_trial(const ExperimentConfig& cfg, const Workspace& ws,
                      Variant variant, std::uint64_t seed, std::size_t n_labels,
                      const std::vector<unsigned char>* pretrained) {
    const auto t0 = std::chrono::steady_clock::now();
    TrialResult res;
    res.variant = variant;
    res.seed = seed;

    const dataio::Encoding enc = variant_encoding(cfg, variant);
    dataio::RecordSet subset;
    const dataio::RecordSet& train_rows =
        n_labels > 0
            ? (subset = dataio::fewshot_sample(ws.train, ws.schema, n_labels,
                                               mix_seed(seed, 11)),
               subset)
            : ws.train;
    res.n_labels = train_rows.size();

    dataio::EncodedDataset enc_train = ws.prep.transform(train_rows, enc);
    dataio::EncodedDataset enc_test = ws.prep.transform(ws.test, enc);

    if (variant == Variant::DT) {
        auto tree = classify::train_decision_tree(enc_train.features, enc_train.labels,
                                                  cfg.dt_min_samples_split);
        auto pred = classify::dt_predict(tree, enc_test.features);
        res.metrics = classify::compute_metrics(enc_test.labels, pred, ws.n_classes);
    } else {
        encoder::ModelConfig mc = make_model_config(cfg, ws, variant);
        encoder::Model model(mc, mix_seed(seed, 7));

        if (is_ssl(variant)) {
            if (pretrained) {
                res.checkpoint = *pretrained;
                encoder::load_checkpoint_bytes(res.checkpoint, model.params, mc.digest());
            } else {
                dataio::EncodedDataset enc_full = ws.prep.transform(ws.train, enc);
                flowgraph::FlowGraph g_full =
                    flowgraph::build_graph(enc_full, mix_seed(seed, 100),
                                           cfg.node_feat_width);
                ssl::PretrainConfig pc;
                pc.epochs = cfg.pretrain_epochs;
                pc.patience = cfg.pretrain_patience;
                pc.lr = cfg.lr;
                pc.seed = mix_seed(seed, 13);
                res.pretrain_history = ssl::pretrain(g_full, model, pc);
                res.checkpoint = encoder::checkpoint_bytes(model.params, mc.digest());
            }
        }

        flowgraph::FlowGraph g_train = flowgraph::build_graph(
            enc_train, mix_seed(seed, 101), cfg.node_feat_width);
        classify::FinetuneConfig fc;
        fc.epochs = cfg.finetune_epochs;
        fc.patience = cfg.finetune_patience;
        fc.lr = cfg.lr;
        res.finetune_history = classify::finetune(g_train, enc_train.labels, model, fc);

        flowgraph::FlowGraph g_test = flowgraph::build_graph(
            enc_test, mix_seed(seed, 102), cfg.node_feat_width);
        auto pred = classify::predict(g_test, model);
        res.metrics = classify::compute_metrics(enc_test.labels, pred.classes,
                                                ws.n_classes);
    }

    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

ResultsTable run_full_data(const ExperimentConfig& cfg) {
    Workspace ws = Workspace::prepare(cfg);
    ResultsTable table;
    for (Variant v : cfg.variants)
        for (std::size_t i = 0; i < cfg.n_trials; ++i)
            table.trials.push_back(run_trial(cfg, ws, v, cfg.base_seed + i, 0));
    table.recompute_aggregates();
    return table;
}

ResultsTable run_fewshot_sweep(const ExperimentConfig& cfg) {
    Workspace ws = Workspace::prepare(cfg);
    ResultsTable table;
    for (Variant v : cfg.variants) {
        for (std::size_t i = 0; i < cfg.n_trials; ++i) {
            const std::uint64_t seed = cfg.base_seed + i;
            std::vector<unsigned char> ckpt;  // pretrain once per seed
            for (std::size_t count : cfg.fewshot_counts) {
                TrialResult r =
                    run_trial(cfg, ws, v, seed, count,
                              is_ssl(v) && !ckpt.empty() ? &ckpt : nullptr);
                if (is_ssl(v) && ckpt.empty()) ckpt = r.checkpoint;
                table.trials.push_back(std::move(r));
            }
        }
    }
    table.recompute_aggregates();
    return table;
}

std::string metrics_json(const classify::MetricsReport& m) {
    json j;
    j["weighted_f1"] = m.weighted_f1;
    j["micro_f1"] = m.micro_f1;
    j["n_samples"] = m.n_samples;
    json pc = json::array();
    for (const auto& s : m.per_class)
        pc.push_back({{"precision", s.precision},
                      {"recall", s.recall},
                      {"f1", s.f1},
                      {"support", s.support}});
    j["per_class"] = pc;
    j["confusion"] = m.confusion;
    return j.dump(2);
}

std::string results_json(const ResultsTable& table, const ExperimentConfig& cfg) {
    json j;
    j["schema_version"] = 1;
    j["config_digest"] = cfg.digest();
    j["config"] = json::parse(cfg.to_json_text());
    json trials = json::array();
    for (const auto& t : table.trials) {
        json tj;
        tj["variant"] = variant_name(t.variant);
        tj["seed"] = t.seed;
        tj["n_labels"] = t.n_labels;
        tj["weighted_f1"] = t.metrics.weighted_f1;
        tj["micro_f1"] = t.metrics.micro_f1;
        tj["wall_seconds"] = t.wall_seconds;
        json ph = json::array();
        for (const auto& e : t.pretrain_history) ph.push_back({{"epoch", e.epoch}, {"loss", e.loss}});
        tj["pretrain_history"] = ph;
        json fh = json::array();
        for (const auto& e : t.finetune_history) fh.push_back({{"epoch", e.epoch}, {"loss", e.loss}});
        tj["finetune_history"] = fh;
        trials.push_back(tj);
    }
    j["trials"] = trials;
    json aggs = json::array();
    for (const auto& [key, a] : table.aggregates)
        aggs.push_back({{"variant", key.first},
                        {"n_labels", key.second},
                        {"mean", a.mean},
                        {"stddev", a.stddev},
                        {"min", a.min},
                        {"max", a.max},
                        {"q1", a.q1},
                        {"median", a.median},
                        {"q3", a.q3}});
    j["aggregates"] = aggs;
    return j.dump(2);
}

std::string aggregates_csv(const ResultsTable& table) {
    std::string out = "variant,n_labels,mean,stddev,min,q1,median,q3,max\n";
    for (const auto& [key, a] : table.aggregates) {
        out += key.first + "," + std::to_string(key.second);
        for (double v : {a.mean, a.stddev, a.min, a.q1, a.median, a.q3, a.max})
            out += "," + std::to_string(v);
        out += "\n";
    }
    return out;
}

}  // namespace nidsgnn::harness
