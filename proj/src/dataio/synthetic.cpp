#include "nidsgnn/dataio/synthetic.hpp"

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

namespace nidsgnn::dataio {

namespace {

const char* kAttackNames[] = {"DoS", "Scanning", "Backdoor", "XSS", "Injection", "DDoS"};
const char* kBenignDomains[] = {"example.com", "google.com", "github.com",
                                "wikipedia.org", "cloud-cdn.net"};

// base magnitude per numeric feature:
// IN_BYTES, IN_PKTS, OUT_BYTES, OUT_PKTS, FLOW_DURATION_MILLISECONDS
const double kBase[] = {500.0, 10.0, 800.0, 12.0, 200.0};

std::size_t pick_weighted(const std::vector<double>& w, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double total = 0.0;
    for (double x : w) total += x;
    double r = u(rng) * total;
    for (std::size_t i = 0; i < w.size(); ++i) {
        r -= w[i];
        if (r <= 0.0) return i;
    }
    return w.size() - 1;
}

std::vector<double> class_weights(std::size_t n_opts, std::size_t cls,
                                  std::uint64_t salt) {
    // fixed per-class preference: each class leans on a different option
    std::vector<double> w(n_opts, 1.0);
    w[(cls * 2654435761u + salt) % n_opts] += 2.5;
    return w;
}

}  // namespace

FeatureSchema synthetic_schema() {
    FeatureSchema s;
    s.numeric = {"IN_BYTES", "IN_PKTS", "OUT_BYTES", "OUT_PKTS",
                 "FLOW_DURATION_MILLISECONDS"};
    s.categorical = {{"PROTOCOL", {"tcp", "udp", "icmp"}},
                     {"L7_PROTO", {"http", "dns", "ssl", "ftp", "smtp"}},
                     {"TCP_FLAGS", {"S", "SA", "F", "R", "P"}}};
    s.unbounded = {"DNS_QUERY"};
    s.allowlist_column = "DNS_QUERY";
    s.source_ip = "IPV4_SRC_ADDR";
    s.dest_ip = "IPV4_DST_ADDR";
    s.dest_port = "L4_DST_PORT";
    s.label = "Label";
    s.attack_category = "Attack";
    s.validate();
    return s;
}

std::string synthetic_allowlist_text() {
    std::string out;
    for (const char* d : kBenignDomains) {
        out += d;
        out += "\n";
    }
    return out;
}

RecordSet gen_synthetic(const SyntheticConfig& cfg) {
    if (cfg.attack_rate <= 0.0 || cfg.attack_rate >= 1.0)
        throw std::invalid_argument("gen_synthetic: attack_rate must be in (0,1)");
    if (cfg.n_hosts == 0) throw std::invalid_argument("gen_synthetic: n_hosts must be > 0");
    if (cfg.n_attack_classes == 0 || cfg.n_attack_classes > std::size(kAttackNames))
        throw std::invalid_argument("gen_synthetic: n_attack_classes out of range");
    if (cfg.separation < 0.0 || cfg.separation > 1.0)
        throw std::invalid_argument("gen_synthetic: separation must be in [0,1]");

    RecordSet rs;
    rs.columns = {"IPV4_SRC_ADDR", "IPV4_DST_ADDR", "L4_DST_PORT",
                  "PROTOCOL",      "L7_PROTO",      "TCP_FLAGS",
                  "IN_BYTES",      "IN_PKTS",       "OUT_BYTES",
                  "OUT_PKTS",      "FLOW_DURATION_MILLISECONDS",
                  "DNS_QUERY",     "Label",         "Attack"};

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    const std::array<const char*, 3> proto = {"tcp", "udp", "icmp"};
    const std::array<const char*, 5> l7 = {"http", "dns", "ssl", "ftp", "smtp"};
    const std::array<const char*, 5> flags = {"S", "SA", "F", "R", "P"};
    const std::array<int, 5> benign_ports = {80, 443, 53, 22, 25};

    rs.rows.reserve(cfg.n_flows);
    for (std::size_t i = 0; i < cfg.n_flows; ++i) {
        const bool attack = u01(rng) < cfg.attack_rate;
        std::size_t cls = 0;
        if (attack)
            cls = 1 + std::size_t(u01(rng) * double(cfg.n_attack_classes)) %
                          cfg.n_attack_classes;

        std::vector<std::string> row(rs.columns.size());

        // source host
        const std::size_t sh = std::size_t(u01(rng) * double(cfg.n_hosts)) % cfg.n_hosts;
        row[0] = "10.0." + std::to_string(sh / 250) + "." + std::to_string(sh % 250 + 1);

        // destination endpoint: benign spread over hosts, attacks of class c
        // hammer a few fixed endpoints
        if (cls == 0) {
            const std::size_t dh = std::size_t(u01(rng) * double(cfg.n_hosts)) % cfg.n_hosts;
            row[1] = "192.168." + std::to_string(dh / 250) + "." + std::to_string(dh % 250 + 1);
            row[2] = std::to_string(benign_ports[pick_weighted(
                class_weights(benign_ports.size(), sh, 7), rng)]);
        } else {
            const std::size_t j =
                std::size_t(u01(rng) * double(cfg.attack_dst_per_class)) %
                cfg.attack_dst_per_class;
            row[1] = "203.0.113." + std::to_string(cls * 10 + j);
            row[2] = std::to_string(6000 + cls * 10 + j);
        }

        row[3] = proto[pick_weighted(class_weights(proto.size(), cls, 1), rng)];
        row[4] = l7[pick_weighted(class_weights(l7.size(), cls, 2), rng)];
        row[5] = flags[pick_weighted(class_weights(flags.size(), cls, 3), rng)];

        // numeric features: class centers spaced by separation, uniform noise
        // wide enough to overlap at low separation and vanish at 1
        for (std::size_t f = 0; f < 5; ++f) {
            const double base = kBase[f];
            const double center = base + double(cls) * base * cfg.separation;
            const double width = base * (0.75 * (1.0 - cfg.separation) + 0.01);
            const double v = center + (2.0 * u01(rng) - 1.0) * width;
            row[6 + f] = std::to_string(std::llround(std::max(v, 0.0)));
        }

        // DNS query: benign flows mostly hit allowlisted domains
        const double p_allow = cls == 0 ? 0.9 : 0.2;
        if (u01(rng) < p_allow) {
            row[11] = kBenignDomains[std::size_t(u01(rng) * 5.0) % 5];
        } else {
            row[11] = "host" + std::to_string(std::size_t(u01(rng) * 1000.0)) + ".site" +
                      std::to_string(std::size_t(u01(rng) * 100.0)) + ".xyz";
        }

        row[12] = std::to_string(cls);
        row[13] = cls == 0 ? "Benign" : kAttackNames[cls - 1];
        rs.rows.push_back(std::move(row));
    }
    return rs;
}

}  // namespace nidsgnn::dataio
