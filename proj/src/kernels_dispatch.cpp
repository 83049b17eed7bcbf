#include "uavrl/kernels.hpp"

#include <cstdlib>
#include <string>

#include "uavrl/errors.hpp"

namespace uavrl::kernels {

#ifdef UAVRL_WITH_AVX2
const Ops& avx2_ops();
#endif
#ifdef UAVRL_WITH_AVX512
const Ops& avx512_ops();
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool cpu_has_avx512() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx512dq");
#else
    return false;
#endif
}

std::vector<const Ops*> available() {
    std::vector<const Ops*> out{&scalar()};
#ifdef UAVRL_WITH_AVX2
    if (cpu_has_avx2()) out.push_back(&avx2_ops());
#endif
#ifdef UAVRL_WITH_AVX512
    if (cpu_has_avx512()) out.push_back(&avx512_ops());
#endif
    return out;
}

const Ops* find(std::string_view name) {
    for (const Ops* ops : available())
        if (name == ops->name) return ops;
    return nullptr;
}

namespace {

const Ops* select_initial() {
    if (const char* env = std::getenv("UAVRL_KERNELS"); env && *env) {
        if (const Ops* ops = find(env)) return ops;
        throw ConfigError(std::string("UAVRL_KERNELS=") + env +
                          " is not an available kernel variant on this machine");
    }
    const auto all = available();
    return all.back(); // widest supported variant
}

const Ops*& active_slot() {
    static const Ops* slot = select_initial();
    return slot;
}

} // namespace

const Ops& active() { return *active_slot(); }

void force(std::string_view name) {
    const Ops* ops = find(name);
    if (!ops)
        throw ConfigError("unknown or unavailable kernel variant: " + std::string(name));
    active_slot() = ops;
}

} // namespace uavrl::kernels
