#include "nidsgnn/dataio/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace nidsgnn::dataio {

namespace {

double cell_double(const std::string& s) {
    double v;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw std::runtime_error("non-numeric cell: '" + s + "'");
    return v;
}

double log2p1(double x) { return std::log2(std::max(x, 0.0) + 1.0); }

std::string lower(std::string s) {
    for (char& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// mean/std over v, population convention (matches StandardScaler).
void mean_std(const std::vector<double>& v, double& mean, double& stddev) {
    double s = 0.0;
    for (double x : v) s += x;
    mean = s / double(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    stddev = std::sqrt(ss / double(v.size()));
}

}  // namespace

bool FittedPreprocessor::allowlisted(const std::string& query) const {
    const std::string q = lower(query);
    if (allowlist_.count(q)) return true;
    // suffix match on the registrable domain
    for (std::size_t dot = q.find('.'); dot != std::string::npos; dot = q.find('.', dot + 1))
        if (allowlist_.count(q.substr(dot + 1))) return true;
    return false;
}

std::set<std::string> FittedPreprocessor::parse_allowlist(const std::string& text) {
    std::set<std::string> out;
    std::string line;
    std::istringstream ss(text);
    while (std::getline(ss, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
            line.pop_back();
        if (!line.empty()) out.insert(lower(line));
    }
    return out;
}

std::set<std::string> FittedPreprocessor::load_allowlist(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open allowlist file: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_allowlist(buf.str());
}

FittedPreprocessor FittedPreprocessor::fit(const RecordSet& train,
                                           const FeatureSchema& schema,
                                           const std::string& allowlist_path) {
    return fit(train, schema,
               allowlist_path.empty() ? std::set<std::string>{}
                                      : load_allowlist(allowlist_path));
}

FittedPreprocessor FittedPreprocessor::fit(const RecordSet& train,
                                           const FeatureSchema& schema,
                                           std::set<std::string> allowlist) {
    if (train.size() < 2)
        throw std::invalid_argument("fit_preprocessor: need at least 2 rows");
    FittedPreprocessor fp;
    fp.schema_ = schema;
    fp.fit_digest_ = train.digest();

    for (const auto& name : schema.numeric) {
        const std::size_t ci = train.col(name);
        std::vector<double> raw(train.size());
        for (std::size_t r = 0; r < train.size(); ++r)
            raw[r] = cell_double(train.rows[r][ci]);
        double mean, stddev;
        mean_std(raw, mean, stddev);
        if (stddev == 0.0) {
            std::cerr << "warning: dropping constant numeric feature '" << name << "'\n";
            fp.dropped_.push_back(name);
            continue;
        }
        NumericStat st;
        st.name = name;
        if (stddev > 2.0 * std::abs(mean)) {
            st.log2_applied = true;
            for (double& x : raw) x = log2p1(x);
            mean_std(raw, st.mean, st.stddev);
            if (st.stddev == 0.0) {
                std::cerr << "warning: dropping constant numeric feature '" << name << "'\n";
                fp.dropped_.push_back(name);
                continue;
            }
        } else {
            st.mean = mean;
            st.stddev = stddev;
        }
        fp.numeric_.push_back(std::move(st));
    }

    const bool labeled = train.has_col(schema.label);
    std::vector<double> target;
    if (labeled) {
        target.resize(train.size());
        for (std::size_t r = 0; r < train.size(); ++r)
            target[r] = train.label_of(r, schema) != 0 ? 1.0 : 0.0;
        double s = 0.0;
        for (double t : target) s += t;
        fp.global_target_mean_ = s / double(target.size());
        fp.has_target_table_ = true;
    }

    auto fit_cat = [&](const std::string& name, const std::vector<std::string>& declared,
                       auto value_of, bool derived) {
        CatVocab cv;
        cv.name = name;
        if (!declared.empty()) {
            for (const auto& v : declared)
                cv.index.emplace(v, std::uint32_t(cv.index.size()));
        } else {
            for (std::size_t r = 0; r < train.size(); ++r)
                cv.index.emplace(value_of(r), 0u);
            std::uint32_t i = 0;
            for (auto& [k, v] : cv.index) v = i++;
        }
        cv.unknown_slot = std::uint32_t(cv.index.size());
        cv.size = cv.unknown_slot + (derived ? 0 : 1);  // derived values never unseen
        if (labeled) {
            std::map<std::string, std::pair<double, double>> acc;  // cat -> (count,sum)
            for (std::size_t r = 0; r < train.size(); ++r) {
                auto& a = acc[value_of(r)];
                a.first += 1.0;
                a.second += target[r];
            }
            for (const auto& [cat, a] : acc) {
                const double mean_c = a.second / a.first;
                cv.target_enc[cat] = (a.first * mean_c + kTargetSmoothing * fp.global_target_mean_) /
                                     (a.first + kTargetSmoothing);
            }
        }
        fp.cats_.push_back(std::move(cv));
    };

    for (const auto& cat : schema.categorical) {
        const std::size_t ci = train.col(cat.name);
        fit_cat(cat.name, cat.vocabulary,
                [&](std::size_t r) -> const std::string& { return train.rows[r][ci]; },
                false);
    }

    if (schema.allowlist_column) {
        fp.allowlist_ = std::move(allowlist);
        const std::size_t ci = train.col(*schema.allowlist_column);
        std::vector<std::string> bits(train.size());
        for (std::size_t r = 0; r < train.size(); ++r)
            bits[r] = fp.allowlisted(train.rows[r][ci]) ? "1" : "0";
        fit_cat(*schema.allowlist_column + "_allowlisted", {"0", "1"},
                [&](std::size_t r) -> const std::string& { return bits[r]; }, true);
        fp.has_allowlist_feature_ = true;
    }

    if (fp.numeric_.empty() && fp.cats_.empty())
        throw std::runtime_error("fit_preprocessor: no usable features after fitting");
    return fp;
}

double FittedPreprocessor::standardized(std::size_t i, double raw) const {
    const NumericStat& st = numeric_[i];
    const double x = st.log2_applied ? log2p1(raw) : raw;
    return (x - st.mean) / st.stddev;
}

std::size_t FittedPreprocessor::onehot_width() const {
    std::size_t w = numeric_.size();
    for (const auto& c : cats_) w += c.size;
    return w;
}

std::size_t FittedPreprocessor::target_width() const {
    return numeric_.size() + cats_.size();
}

void FittedPreprocessor::fill_common(const RecordSet& rs, EncodedDataset& out) const {
    const std::size_t dst_ip = rs.col(schema_.dest_ip);
    const std::size_t dst_port = rs.col(schema_.dest_port);
    const bool has_src = !schema_.source_ip.empty() && rs.has_col(schema_.source_ip);
    for (std::size_t r = 0; r < rs.size(); ++r) {
        out.dst_ip.push_back(rs.rows[r][dst_ip]);
        out.dst_port.push_back(rs.rows[r][dst_port]);
        out.src_ip.push_back(has_src ? rs.rows[r][rs.col(schema_.source_ip)] : "");
    }
    if (rs.has_col(schema_.label)) {
        out.labels.resize(rs.size());
        for (std::size_t r = 0; r < rs.size(); ++r)
            out.labels[r] = rs.label_of(r, schema_);
    }
    if (!out.features.all_finite())
        throw std::runtime_error("transform produced non-finite values");
}

EncodedDataset FittedPreprocessor::transform_onehot(const RecordSet& rs) const {
    EncodedDataset out;
    out.encoding = Encoding::onehot;
    out.numeric_width = numeric_.size();
    out.categorical_width = onehot_width() - numeric_.size();
    out.features = nn::Matrix(rs.size(), onehot_width());

    std::vector<std::size_t> ncols;
    for (const auto& st : numeric_) ncols.push_back(rs.col(st.name));
    std::vector<std::size_t> ccols;
    for (std::size_t i = 0; i < cats_.size(); ++i)
        ccols.push_back(has_allowlist_feature_ && i + 1 == cats_.size()
                            ? rs.col(*schema_.allowlist_column)
                            : rs.col(cats_[i].name));

    for (std::size_t r = 0; r < rs.size(); ++r) {
        double* row = out.features.row(r);
        std::size_t off = 0;
        for (std::size_t i = 0; i < numeric_.size(); ++i)
            row[off++] = standardized(i, cell_double(rs.rows[r][ncols[i]]));
        for (std::size_t i = 0; i < cats_.size(); ++i) {
            const CatVocab& cv = cats_[i];
            std::uint32_t slot;
            if (has_allowlist_feature_ && i + 1 == cats_.size()) {
                slot = allowlisted(rs.rows[r][ccols[i]]) ? 1u : 0u;
            } else {
                auto it = cv.index.find(rs.rows[r][ccols[i]]);
                slot = it == cv.index.end() ? cv.unknown_slot : it->second;
            }
            row[off + slot] = 1.0;
            off += cv.size;
        }
    }
    fill_common(rs, out);
    return out;
}

EncodedDataset FittedPreprocessor::transform_target(const RecordSet& rs) const {
    if (!has_target_table_)
        throw std::runtime_error(
            "transform_target_encoding: preprocessor was fit on unlabeled data");
    EncodedDataset out;
    out.encoding = Encoding::target;
    out.numeric_width = numeric_.size();
    out.categorical_width = cats_.size();
    out.features = nn::Matrix(rs.size(), target_width());

    std::vector<std::size_t> ncols;
    for (const auto& st : numeric_) ncols.push_back(rs.col(st.name));
    std::vector<std::size_t> ccols;
    for (std::size_t i = 0; i < cats_.size(); ++i)
        ccols.push_back(has_allowlist_feature_ && i + 1 == cats_.size()
                            ? rs.col(*schema_.allowlist_column)
                            : rs.col(cats_[i].name));

    for (std::size_t r = 0; r < rs.size(); ++r) {
        double* row = out.features.row(r);
        std::size_t off = 0;
        for (std::size_t i = 0; i < numeric_.size(); ++i)
            row[off++] = standardized(i, cell_double(rs.rows[r][ncols[i]]));
        for (std::size_t i = 0; i < cats_.size(); ++i) {
            std::string key = rs.rows[r][ccols[i]];
            if (has_allowlist_feature_ && i + 1 == cats_.size())
                key = allowlisted(key) ? "1" : "0";
            auto it = cats_[i].target_enc.find(key);
            row[off++] = it == cats_[i].target_enc.end() ? global_target_mean_ : it->second;
        }
    }
    fill_common(rs, out);
    return out;
}

}  // namespace nidsgnn::dataio
