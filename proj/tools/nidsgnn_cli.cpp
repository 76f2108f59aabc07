// nidsgnn: flow-graph intrusion detection pipeline driver.
//
// Subcommands: gen-data, pretrain, finetune, eval, full-data, fewshot.
// All experiment subcommands read a JSON config (see README for the key
// set); results are written as JSON/CSV under the config's out_dir, which
// the NIDSGNN_OUT_DIR environment variable overrides.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nidsgnn/classify/finetune.hpp"
#include "nidsgnn/classify/metrics.hpp"
#include "nidsgnn/classify/tree.hpp"
#include "nidsgnn/dataio/sampling.hpp"
#include "nidsgnn/dataio/synthetic.hpp"
#include "nidsgnn/encoder/checkpoint.hpp"
#include "nidsgnn/flowgraph/graph.hpp"
#include "nidsgnn/harness/runner.hpp"
#include "nidsgnn/kern/kernels.hpp"
#include "nidsgnn/ssl/dgi.hpp"

namespace fs = std::filesystem;
using namespace nidsgnn;

namespace {

void write_text(const std::string& path, const std::string& text) {
    if (const fs::path p = fs::path(path).parent_path(); !p.empty())
        fs::create_directories(p);
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

std::string out_path(const harness::ExperimentConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    return (fs::path(cfg.out_dir) / name).string();
}

std::string history_json(const std::vector<ssl::EpochLoss>& h) {
    std::string s = "[";
    for (std::size_t i = 0; i < h.size(); ++i) {
        s += (i ? "," : "") + std::string("{\"epoch\":") + std::to_string(h[i].epoch) +
             ",\"loss\":" + std::to_string(h[i].loss) + "}";
    }
    return s + "]";
}

struct SingleRun {
    harness::ExperimentConfig cfg;
    harness::Workspace ws;
    harness::Variant variant;
    std::uint64_t seed;
};

SingleRun load_single(const std::string& config_path, const std::string& variant_flag) {
    SingleRun r{harness::ExperimentConfig::from_json_file(config_path), {},
                harness::Variant::D_SSL, 0};
    r.ws = harness::Workspace::prepare(r.cfg);
    r.variant = variant_flag.empty() ? r.cfg.variants.at(0)
                                     : harness::parse_variant(variant_flag);
    r.seed = r.cfg.base_seed;
    return r;
}

int cmd_gen_data(const dataio::SyntheticConfig& sc, const std::string& out,
                 const std::string& schema_out, const std::string& allowlist_out) {
    dataio::RecordSet rs = dataio::gen_synthetic(sc);
    write_text(out, "");  // create parent dirs; write_csv overwrites
    dataio::write_csv(rs, out);
    if (!schema_out.empty()) write_text(schema_out, dataio::synthetic_schema().to_text());
    if (!allowlist_out.empty()) write_text(allowlist_out, dataio::synthetic_allowlist_text());
    std::cout << "wrote " << rs.size() << " flows to " << out << "\n";
    return 0;
}

int cmd_pretrain(const std::string& config_path, const std::string& variant_flag,
                 const std::string& out) {
    SingleRun r = load_single(config_path, variant_flag);
    const dataio::Encoding enc = harness::variant_encoding(r.cfg, r.variant);
    const encoder::ModelConfig mc = harness::make_model_config(r.cfg, r.ws, r.variant);
    dataio::EncodedDataset enc_train = r.ws.prep.transform(r.ws.train, enc);
    flowgraph::FlowGraph g = flowgraph::build_graph(
        enc_train, harness::mix_seed(r.seed, 100), r.cfg.node_feat_width);

    encoder::Model model(mc, harness::mix_seed(r.seed, 7));
    ssl::PretrainConfig pc;
    pc.epochs = r.cfg.pretrain_epochs;
    pc.patience = r.cfg.pretrain_patience;
    pc.lr = r.cfg.lr;
    pc.seed = harness::mix_seed(r.seed, 13);
    auto history = ssl::pretrain(g, model, pc);

    const std::string ckpt = out.empty() ? out_path(r.cfg, "pretrained.ckpt") : out;
    encoder::save_checkpoint(ckpt, model.params, mc.digest());
    write_text(out_path(r.cfg, "pretrain_history.json"), history_json(history));
    std::cout << "pretrained " << harness::variant_name(r.variant) << " for "
              << history.size() << " epochs (final loss "
              << (history.empty() ? 0.0 : history.back().loss) << "), checkpoint "
              << ckpt << "\n";
    return 0;
}

int cmd_finetune(const std::string& config_path, const std::string& variant_flag,
                 const std::string& checkpoint_in, std::size_t labels,
                 const std::string& out) {
    SingleRun r = load_single(config_path, variant_flag);
    const dataio::Encoding enc = harness::variant_encoding(r.cfg, r.variant);
    const encoder::ModelConfig mc = harness::make_model_config(r.cfg, r.ws, r.variant);

    dataio::RecordSet subset;
    const dataio::RecordSet& train_rows =
        labels > 0 ? (subset = dataio::fewshot_sample(r.ws.train, r.ws.schema, labels,
                                                      harness::mix_seed(r.seed, 11)),
                      subset)
                   : r.ws.train;
    dataio::EncodedDataset enc_train = r.ws.prep.transform(train_rows, enc);

    encoder::Model model(mc, harness::mix_seed(r.seed, 7));
    if (!checkpoint_in.empty())
        encoder::load_checkpoint(checkpoint_in, model.params, mc.digest());

    flowgraph::FlowGraph g = flowgraph::build_graph(
        enc_train, harness::mix_seed(r.seed, 101), r.cfg.node_feat_width);
    classify::FinetuneConfig fc;
    fc.epochs = r.cfg.finetune_epochs;
    fc.patience = r.cfg.finetune_patience;
    fc.lr = r.cfg.lr;
    auto history = classify::finetune(g, enc_train.labels, model, fc);

    const std::string ckpt = out.empty() ? out_path(r.cfg, "finetuned.ckpt") : out;
    encoder::save_checkpoint(ckpt, model.params, mc.digest());

    dataio::EncodedDataset enc_test = r.ws.prep.transform(r.ws.test, enc);
    flowgraph::FlowGraph g_test = flowgraph::build_graph(
        enc_test, harness::mix_seed(r.seed, 102), r.cfg.node_feat_width);
    auto pred = classify::predict(g_test, model);
    auto m = classify::compute_metrics(enc_test.labels, pred.classes, r.ws.n_classes);
    write_text(out_path(r.cfg, "finetune_metrics.json"), harness::metrics_json(m));
    std::cout << "finetuned " << harness::variant_name(r.variant) << " on "
              << enc_train.size() << " labels for " << history.size()
              << " epochs; test weighted-F1 " << m.weighted_f1 << ", checkpoint "
              << ckpt << "\n";
    return 0;
}

int cmd_eval(const std::string& config_path, const std::string& variant_flag,
             const std::string& checkpoint_in, const std::string& out) {
    SingleRun r = load_single(config_path, variant_flag);
    const dataio::Encoding enc = harness::variant_encoding(r.cfg, r.variant);
    const encoder::ModelConfig mc = harness::make_model_config(r.cfg, r.ws, r.variant);

    encoder::Model model(mc, harness::mix_seed(r.seed, 7));
    encoder::load_checkpoint(checkpoint_in, model.params, mc.digest());

    dataio::EncodedDataset enc_test = r.ws.prep.transform(r.ws.test, enc);
    flowgraph::FlowGraph g_test = flowgraph::build_graph(
        enc_test, harness::mix_seed(r.seed, 102), r.cfg.node_feat_width);
    auto pred = classify::predict(g_test, model);
    auto m = classify::compute_metrics(enc_test.labels, pred.classes, r.ws.n_classes);
    const std::string json = harness::metrics_json(m);
    if (out.empty())
        std::cout << json << "\n";
    else {
        write_text(out, json);
        std::cout << "weighted-F1 " << m.weighted_f1 << ", micro-F1 " << m.micro_f1
                  << " -> " << out << "\n";
    }
    return 0;
}

int cmd_table(const std::string& config_path, const std::string& labels_flag,
              const std::string& variant_flag, bool fewshot) {
    harness::ExperimentConfig cfg = harness::ExperimentConfig::from_json_file(config_path);
    if (!variant_flag.empty()) cfg.variants = {harness::parse_variant(variant_flag)};
    if (!labels_flag.empty()) {
        cfg.fewshot_counts.clear();
        std::size_t pos = 0;
        while (pos < labels_flag.size()) {
            const std::size_t comma = labels_flag.find(',', pos);
            cfg.fewshot_counts.push_back(
                std::stoul(labels_flag.substr(pos, comma - pos)));
            pos = comma == std::string::npos ? labels_flag.size() : comma + 1;
        }
        cfg.validate();
    }
    harness::ResultsTable table =
        fewshot ? harness::run_fewshot_sweep(cfg) : harness::run_full_data(cfg);
    const char* stem = fewshot ? "fewshot" : "full_data";
    write_text(out_path(cfg, std::string(stem) + "_results.json"),
               harness::results_json(table, cfg));
    write_text(out_path(cfg, std::string(stem) + "_aggregates.csv"),
               harness::aggregates_csv(table));
    std::cout << table.trials.size() << " trials -> " << cfg.out_dir << "/" << stem
              << "_results.json (kernel backend: " << kern::active_name() << ")\n";
    for (const auto& [key, a] : table.aggregates)
        std::cout << "  " << key.first << " @ " << key.second
                  << " labels: weighted-F1 mean " << a.mean << " (min " << a.min
                  << ", max " << a.max << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flow-graph intrusion detection pipeline"};
    app.require_subcommand(1);

    // gen-data
    dataio::SyntheticConfig sc;
    std::string gen_out, gen_schema_out, gen_allowlist_out;
    auto* gen = app.add_subcommand("gen-data", "generate a labeled synthetic flow CSV");
    gen->add_option("--flows", sc.n_flows, "number of flows");
    gen->add_option("--hosts", sc.n_hosts, "number of source hosts");
    gen->add_option("--attack-rate", sc.attack_rate, "fraction of attack flows");
    gen->add_option("--classes", sc.n_attack_classes, "number of attack classes");
    gen->add_option("--dst-per-class", sc.attack_dst_per_class,
                    "attack destinations per class");
    gen->add_option("--separation", sc.separation, "class separability in [0,1]");
    gen->add_option("--seed", sc.seed, "generator seed");
    gen->add_option("--out", gen_out, "output CSV path")->required();
    gen->add_option("--schema-out", gen_schema_out, "also write the matching schema");
    gen->add_option("--allowlist-out", gen_allowlist_out,
                    "also write the benign-domain allowlist");

    // shared flags for the experiment subcommands
    std::string config_path, variant_flag, ckpt_in, out_file, labels_flag;
    std::size_t labels_count = 0;

    auto* pre = app.add_subcommand("pretrain",
                                   "self-supervised pre-training on the training graph");
    pre->add_option("--config", config_path, "experiment config JSON")->required();
    pre->add_option("--variant", variant_flag, "model variant (D, T, D-SSL, T-SSL)");
    pre->add_option("--out", out_file, "checkpoint output path");

    auto* fin = app.add_subcommand("finetune", "supervised training / fine-tuning");
    fin->add_option("--config", config_path, "experiment config JSON")->required();
    fin->add_option("--variant", variant_flag, "model variant");
    fin->add_option("--checkpoint", ckpt_in, "pre-trained checkpoint to start from");
    fin->add_option("--labels", labels_count, "balanced label budget (0 = all)");
    fin->add_option("--out", out_file, "trained-model checkpoint path");

    auto* ev = app.add_subcommand("eval", "evaluate a checkpoint on the test split");
    ev->add_option("--config", config_path, "experiment config JSON")->required();
    ev->add_option("--variant", variant_flag, "model variant");
    ev->add_option("--checkpoint", ckpt_in, "model checkpoint")->required();
    ev->add_option("--out", out_file, "metrics JSON path (default: stdout)");

    auto* full = app.add_subcommand("full-data", "full-data protocol over all variants");
    full->add_option("--config", config_path, "experiment config JSON")->required();
    full->add_option("--variant", variant_flag, "restrict to one variant");

    auto* few = app.add_subcommand("fewshot", "few-shot label-budget sweep");
    few->add_option("--config", config_path, "experiment config JSON")->required();
    few->add_option("--variant", variant_flag, "restrict to one variant");
    few->add_option("--labels", labels_flag, "comma-separated label budgets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen_data(sc, gen_out, gen_schema_out, gen_allowlist_out);
        if (pre->parsed()) return cmd_pretrain(config_path, variant_flag, out_file);
        if (fin->parsed())
            return cmd_finetune(config_path, variant_flag, ckpt_in, labels_count, out_file);
        if (ev->parsed()) return cmd_eval(config_path, variant_flag, ckpt_in, out_file);
        if (full->parsed()) return cmd_table(config_path, "", variant_flag, false);
        if (few->parsed()) return cmd_table(config_path, labels_flag, variant_flag, true);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
