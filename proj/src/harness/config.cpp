#include "nidsgnn/harness/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nidsgnn::harness {

using nlohmann::json;

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::D: return "D";
        case Variant::T: return "T";
        case Variant::D_SSL: return "D-SSL";
        case Variant::T_SSL: return "T-SSL";
        case Variant::DT: return "DT";
    }
    return "?";
}

Variant parse_variant(const std::string& s) {
    if (s == "D") return Variant::D;
    if (s == "T") return Variant::T;
    if (s == "D-SSL" || s == "D_SSL") return Variant::D_SSL;
    if (s == "T-SSL" || s == "T_SSL") return Variant::T_SSL;
    if (s == "DT") return Variant::DT;
    throw std::invalid_argument("unknown variant '" + s +
                                "' (expected D, T, D-SSL, T-SSL, or DT)");
}

void ExperimentConfig::validate() const {
    const bool has_csv = !train_csv.empty() || !test_csv.empty();
    if (has_csv && (train_csv.empty() || test_csv.empty() || schema_path.empty()))
        throw std::invalid_argument(
            "config: CSV mode needs train_csv, test_csv and schema");
    if (!has_csv && !synthetic)
        throw std::invalid_argument("config: need CSV paths or a synthetic block");
    if (variants.empty()) throw std::invalid_argument("config: no variants");
    for (Variant v : variants)
        if ((v == Variant::D_SSL || v == Variant::T_SSL) && pretrain_epochs == 0)
            throw std::invalid_argument(
                "config: SSL variants require a pretrain epoch budget");
    for (std::size_t i = 1; i < fewshot_counts.size(); ++i)
        if (fewshot_counts[i] <= fewshot_counts[i - 1])
            throw std::invalid_argument(
                "config: fewshot label counts must be strictly ascending");
    if (n_trials == 0) throw std::invalid_argument("config: n_trials must be >= 1");
    if (lr <= 0.0) throw std::invalid_argument("config: lr must be positive");
}

std::uint64_t ExperimentConfig::digest() const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : to_json_text()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string ExperimentConfig::to_json_text() const {
    json j;
    if (!train_csv.empty()) {
        j["train_csv"] = train_csv;
        j["test_csv"] = test_csv;
        j["schema"] = schema_path;
    }
    if (!allowlist_path.empty()) j["allowlist"] = allowlist_path;
    if (synthetic) {
        j["synthetic"] = {{"flows", synthetic->n_flows},
                          {"hosts", synthetic->n_hosts},
                          {"attack_rate", synthetic->attack_rate},
                          {"attack_classes", synthetic->n_attack_classes},
                          {"attack_dst_per_class", synthetic->attack_dst_per_class},
                          {"separation", synthetic->separation},
                          {"seed", synthetic->seed},
                          {"test_flows", synthetic_test_flows}};
    }
    json vs = json::array();
    for (Variant v : variants) vs.push_back(variant_name(v));
    j["variants"] = vs;
    j["d_x"] = d_x;
    j["layers"] = layers;
    j["d_emb"] = d_emb;
    j["d_e"] = d_e;
    j["node_feat_width"] = node_feat_width;
    j["aggregator"] = aggregator == encoder::Aggregator::mean ? "mean" : "sum";
    j["lr"] = lr;
    j["pretrain_epochs"] = pretrain_epochs;
    j["pretrain_patience"] = pretrain_patience;
    j["finetune_epochs"] = finetune_epochs;
    j["finetune_patience"] = finetune_patience;
    j["fewshot_counts"] = fewshot_counts;
    j["n_trials"] = n_trials;
    j["base_seed"] = base_seed;
    j["dt_min_samples_split"] = dt_min_samples_split;
    j["dt_encoding"] = dt_encoding == dataio::Encoding::onehot ? "onehot" : "target";
    j["out_dir"] = out_dir;
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    ExperimentConfig c;
    c.train_csv = j.value("train_csv", "");
    c.test_csv = j.value("test_csv", "");
    c.schema_path = j.value("schema", "");
    c.allowlist_path = j.value("allowlist", "");
    if (j.contains("synthetic")) {
        const auto& s = j["synthetic"];
        dataio::SyntheticConfig sc;
        sc.n_flows = s.value("flows", sc.n_flows);
        sc.n_hosts = s.value("hosts", sc.n_hosts);
        sc.attack_rate = s.value("attack_rate", sc.attack_rate);
        sc.n_attack_classes = s.value("attack_classes", sc.n_attack_classes);
        sc.attack_dst_per_class = s.value("attack_dst_per_class", sc.attack_dst_per_class);
        sc.separation = s.value("separation", sc.separation);
        sc.seed = s.value("seed", sc.seed);
        c.synthetic = sc;
        c.synthetic_test_flows = s.value("test_flows", c.synthetic_test_flows);
    }
    if (j.contains("variants")) {
        c.variants.clear();
        for (const auto& v : j["variants"]) c.variants.push_back(parse_variant(v));
    } else if (j.contains("variant")) {
        c.variants = {parse_variant(j["variant"])};
    }
    c.d_x = j.value("d_x", c.d_x);
    c.layers = j.value("layers", c.layers);
    c.d_emb = j.value("d_emb", c.d_emb);
    c.d_e = j.value("d_e", c.d_e);
    c.node_feat_width = j.value("node_feat_width", c.node_feat_width);
    const std::string agg = j.value("aggregator", "mean");
    if (agg == "mean")
        c.aggregator = encoder::Aggregator::mean;
    else if (agg == "sum")
        c.aggregator = encoder::Aggregator::sum;
    else
        throw std::invalid_argument("config: aggregator must be mean or sum");
    c.lr = j.value("lr", c.lr);
    c.pretrain_epochs = j.value("pretrain_epochs", c.pretrain_epochs);
    c.pretrain_patience = j.value("pretrain_patience", c.pretrain_patience);
    c.finetune_epochs = j.value("finetune_epochs", c.finetune_epochs);
    c.finetune_patience = j.value("finetune_patience", c.finetune_patience);
    if (j.contains("fewshot_counts"))
        c.fewshot_counts = j["fewshot_counts"].get<std::vector<std::size_t>>();
    c.n_trials = j.value("n_trials", c.n_trials);
    c.base_seed = j.value("base_seed", c.base_seed);
    c.dt_min_samples_split = j.value("dt_min_samples_split", c.dt_min_samples_split);
    const std::string dtenc = j.value("dt_encoding", "onehot");
    if (dtenc == "onehot")
        c.dt_encoding = dataio::Encoding::onehot;
    else if (dtenc == "target")
        c.dt_encoding = dataio::Encoding::target;
    else
        throw std::invalid_argument("config: dt_encoding must be onehot or target");
    c.out_dir = j.value("out_dir", c.out_dir);
    if (const char* env = std::getenv("NIDSGNN_OUT_DIR")) c.out_dir = env;
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return from_json_text(buf.str());
}

}  // namespace nidsgnn::harness
