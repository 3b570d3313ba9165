#include "segmerge/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace segmerge::kernels {

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table(Isa isa) {
    if (!isa_supported(isa))
        throw std::runtime_error("kernel set '" + std::string(isa_name(isa)) + "' is not supported on this CPU");
#if defined(__x86_64__) || defined(_M_X64)
    if (isa == Isa::avx2) return avx2::kTable;
#endif
    return scalar::kTable;
}

const KernelTable& active() {
    static const KernelTable& chosen = []() -> const KernelTable& {
        const char* pin = std::getenv("SEGMERGE_ISA");
        if (pin != nullptr && std::string_view(pin) == "scalar") return scalar::kTable;
        return isa_supported(Isa::avx2) ? table(Isa::avx2) : scalar::kTable;
    }();
    return chosen;
}

}  // namespace segmerge::kernels
