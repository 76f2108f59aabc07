#include "nidsgnn/kern/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace nidsgnn::kern {

namespace {

struct Active {
    const Kernels* k;
    std::string name;
};

Active resolve() {
    const char* env = std::getenv("NIDSGNN_KERNEL");
    std::string want = env ? env : "";
    if (want == "scalar") return {&scalar::kernels, "scalar"};
#if defined(__x86_64__)
    if (want == "avx2") {
        if (!avx2::supported())
            throw std::runtime_error("NIDSGNN_KERNEL=avx2 but CPU lacks AVX2");
        return {&avx2::kernels, "avx2"};
    }
    if (want.empty() && avx2::supported()) return {&avx2::kernels, "avx2"};
#endif
    if (!want.empty() && want != "scalar")
        throw std::runtime_error("unknown NIDSGNN_KERNEL backend: " + want);
    return {&scalar::kernels, "scalar"};
}

const Active& instance() {
    static Active a = resolve();
    return a;
}

}  // namespace

const Kernels& active() { return *instance().k; }
const std::string& active_name() { return instance().name; }

}  // namespace nidsgnn::kern
