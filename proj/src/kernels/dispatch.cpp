#include <cstdlib>
#include <string>

#include "frontfix/error.hpp"
#include "frontfix/kernels.hpp"

namespace frontfix::kernels {

#if defined(FRONTFIX_HAVE_AVX2)
const KernelTable* avx2_kernel_table() noexcept;
#endif

std::string_view to_string(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

const KernelTable* avx2_table() noexcept {
#if defined(FRONTFIX_HAVE_AVX2)
    return avx2_kernel_table();
#else
    return nullptr;
#endif
}

bool cpu_supports(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if defined(FRONTFIX_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") != 0;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table_for(Isa isa) {
    if (isa == Isa::scalar) return scalar_table();
    if (isa == Isa::avx2 && avx2_table() != nullptr && cpu_supports(Isa::avx2)) return *avx2_table();
    throw SolverError(ErrorKind::invalid_config, std::string("kernel variant unavailable: ") + std::string(to_string(isa)));
}

namespace {

const KernelTable& select() {
    if (const char* forced = std::getenv("FRONTFIX_ISA")) {
        const std::string choice{forced};
        if (choice == "scalar") return scalar_table();
        if (choice == "avx2") return table_for(Isa::avx2);
    }
    if (cpu_supports(Isa::avx2) && avx2_table() != nullptr) return *avx2_table();
    return scalar_table();
}

}  // namespace

const KernelTable& active() {
    static const KernelTable& chosen = select();
    return chosen;
}

}  // namespace frontfix::kernels
