#include "nidsgnn/dataio/schema.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nidsgnn::dataio {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

void FeatureSchema::validate() const {
    std::set<std::string> seen;
    auto add = [&](const std::string& n, const char* role) {
        if (n.empty()) return;
        if (!seen.insert(n).second)
            throw std::invalid_argument("schema: column '" + n +
                                        "' used in more than one role (" + role + ")");
    };
    for (const auto& n : numeric) add(n, "numeric");
    for (const auto& c : categorical) add(c.name, "categorical");
    for (const auto& n : unbounded) add(n, "unbounded");
    if (numeric.empty() && categorical.empty())
        throw std::invalid_argument("schema: need at least one feature column");
    if (label.empty()) throw std::invalid_argument("schema: label column required");
    if (dest_ip.empty() || dest_port.empty())
        throw std::invalid_argument("schema: dest_ip and dest_port columns required");
    if (allowlist_column) {
        bool found = false;
        for (const auto& n : unbounded) found = found || n == *allowlist_column;
        if (!found)
            throw std::invalid_argument(
                "schema: allowlist_column must be listed under unbounded");
    }
}

FeatureSchema FeatureSchema::parse(const std::string& text) {
    FeatureSchema s;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("schema: expected 'key: value', got '" + line + "'");
        const std::string key = trim(line.substr(0, colon));
        const std::string value = trim(line.substr(colon + 1));
        if (key == "numeric") {
            s.numeric = split(value, ',');
        } else if (key == "categorical") {
            for (const auto& item : split(value, ',')) {
                Categorical c;
                const auto eq = item.find('=');
                if (eq == std::string::npos) {
                    c.name = item;
                } else {
                    c.name = trim(item.substr(0, eq));
                    c.vocabulary = split(item.substr(eq + 1), '|');
                }
                s.categorical.push_back(std::move(c));
            }
        } else if (key == "unbounded") {
            s.unbounded = split(value, ',');
        } else if (key == "allowlist_column") {
            s.allowlist_column = value;
        } else if (key == "source_ip") {
            s.source_ip = value;
        } else if (key == "dest_ip") {
            s.dest_ip = value;
        } else if (key == "dest_port") {
            s.dest_port = value;
        } else if (key == "label") {
            s.label = value;
        } else if (key == "attack_category") {
            s.attack_category = value;
        } else {
            throw std::invalid_argument("schema: unknown key '" + key + "'");
        }
    }
    s.validate();
    return s;
}

FeatureSchema FeatureSchema::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open schema file: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse(buf.str());
}

std::string FeatureSchema::to_text() const {
    std::ostringstream out;
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
        return s;
    };
    out << "numeric: " << join(numeric) << "\n";
    out << "categorical: ";
    for (std::size_t i = 0; i < categorical.size(); ++i) {
        if (i) out << ", ";
        out << categorical[i].name;
        if (!categorical[i].vocabulary.empty()) {
            out << "=";
            for (std::size_t j = 0; j < categorical[i].vocabulary.size(); ++j)
                out << (j ? "|" : "") << categorical[i].vocabulary[j];
        }
    }
    out << "\n";
    if (!unbounded.empty()) out << "unbounded: " << join(unbounded) << "\n";
    if (allowlist_column) out << "allowlist_column: " << *allowlist_column << "\n";
    if (!source_ip.empty()) out << "source_ip: " << source_ip << "\n";
    out << "dest_ip: " << dest_ip << "\n";
    out << "dest_port: " << dest_port << "\n";
    out << "label: " << label << "\n";
    if (!attack_category.empty()) out << "attack_category: " << attack_category << "\n";
    return out.str();
}

}  // namespace nidsgnn::dataio
