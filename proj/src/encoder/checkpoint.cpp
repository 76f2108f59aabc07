#include "nidsgnn/encoder/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace nidsgnn::encoder {

namespace {

constexpr char kMagic[4] = {'N', 'G', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::vector<unsigned char>& out, T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.insert(out.end(), buf, buf + sizeof(T));
}

template <typename T>
T take(const unsigned char*& p, const unsigned char* end) {
    if (p + sizeof(T) > end) throw std::runtime_error("checkpoint: truncated file");
    T v;
    std::memcpy(&v, p, sizeof(T));
    p += sizeof(T);
    return v;
}

}  // namespace

std::vector<unsigned char> checkpoint_bytes(const nn::ParamStore& params,
                                            std::uint64_t config_digest) {
    std::vector<unsigned char> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put<std::uint32_t>(out, kVersion);
    put<std::uint64_t>(out, config_digest);
    put<std::uint32_t>(out, std::uint32_t(params.size()));
    for (const auto& p : params) {
        put<std::uint32_t>(out, std::uint32_t(p->name.size()));
        out.insert(out.end(), p->name.begin(), p->name.end());
        put<std::uint64_t>(out, p->value.rows);
        put<std::uint64_t>(out, p->value.cols);
        const auto* d = reinterpret_cast<const unsigned char*>(p->value.data.data());
        out.insert(out.end(), d, d + p->value.size() * sizeof(double));
    }
    return out;
}

void save_checkpoint(const std::string& path, const nn::ParamStore& params,
                     std::uint64_t config_digest) {
    auto bytes = checkpoint_bytes(params, config_digest);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write checkpoint: " + path);
    f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

void load_checkpoint(const std::string& path, nn::ParamStore& params,
                     std::uint64_t config_digest) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open checkpoint: " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                     std::istreambuf_iterator<char>());
    try {
        load_checkpoint_bytes(bytes, params, config_digest);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string(e.what()) + " (" + path + ")");
    }
}

void load_checkpoint_bytes(const std::vector<unsigned char>& bytes,
                           nn::ParamStore& params, std::uint64_t config_digest) {
    const unsigned char* p = bytes.data();
    const unsigned char* end = p + bytes.size();
    if (bytes.size() < 4 || std::memcmp(p, kMagic, 4) != 0)
        throw std::runtime_error("checkpoint: bad magic");
    p += 4;
    if (take<std::uint32_t>(p, end) != kVersion)
        throw std::runtime_error("checkpoint: unsupported version");
    if (take<std::uint64_t>(p, end) != config_digest)
        throw std::runtime_error("checkpoint: config digest mismatch");
    const std::uint32_t count = take<std::uint32_t>(p, end);
    if (count != params.size())
        throw std::runtime_error("checkpoint: param count mismatch");
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t nlen = take<std::uint32_t>(p, end);
        if (p + nlen > end) throw std::runtime_error("checkpoint: truncated file");
        std::string name(reinterpret_cast<const char*>(p), nlen);
        p += nlen;
        const std::uint64_t rows = take<std::uint64_t>(p, end);
        const std::uint64_t cols = take<std::uint64_t>(p, end);
        nn::Param& prm = params[i];
        if (prm.name != name || prm.value.rows != rows || prm.value.cols != cols)
            throw std::runtime_error("checkpoint: param '" + name +
                                     "' does not match model layout");
        if (p + rows * cols * sizeof(double) > end)
            throw std::runtime_error("checkpoint: truncated data");
        std::memcpy(prm.value.data.data(), p, rows * cols * sizeof(double));
        p += rows * cols * sizeof(double);
    }
}

}  // namespace nidsgnn::encoder
