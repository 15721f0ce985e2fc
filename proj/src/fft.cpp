#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <unordered_map>

namespace ac2d::detail {

namespace {

struct PlanPair {
    fftw_plan c2r = nullptr;
    fftw_plan r2c = nullptr;
};

std::mutex plan_mutex;

PlanPair& plans_for(int g)
{
    // Plans are never destroyed; the set of grid sizes used by a run is small.
    static std::map<int, PlanPair> plans;
    std::lock_guard lock(plan_mutex);
    auto it = plans.find(g);
    if (it != plans.end())
        return it->second;

    const std::size_t n_real = static_cast<std::size_t>(g) * g;
    const std::size_t n_half = static_cast<std::size_t>(g) * (g / 2 + 1);
    auto* r = fftw_alloc_real(n_real);
    auto* c = fftw_alloc_complex(n_half);
    PlanPair p;
    p.c2r = fftw_plan_dft_c2r_2d(g, g, c, r, FFTW_ESTIMATE);
    p.r2c = fftw_plan_dft_r2c_2d(g, g, r, c, FFTW_ESTIMATE);
    fftw_free(r);
    fftw_free(c);
    return plans.emplace(g, p).first->second;
}

struct OwnedWorkspace {
    FftWorkspace ws{};
    explicit OwnedWorkspace(int g)
    {
        ws.grid_size = g;
        ws.half_width = g / 2 + 1;
        ws.real = fftw_alloc_real(static_cast<std::size_t>(g) * g);
        ws.half = reinterpret_cast<std::complex<double>*>(
            fftw_alloc_complex(static_cast<std::size_t>(g) * ws.half_width));
        if (!ws.real || !ws.half)
            throw std::bad_alloc();
    }
    ~OwnedWorkspace()
    {
        fftw_free(ws.real);
        fftw_free(ws.half);
    }
    OwnedWorkspace(const OwnedWorkspace&) = delete;
    OwnedWorkspace& operator=(const OwnedWorkspace&) = delete;
};

}  // namespace

FftWorkspace& workspace(int grid_size)
{
    thread_local std::unordered_map<int, std::unique_ptr<OwnedWorkspace>> pool;
    auto& slot = pool[grid_size];
    if (!slot)
        slot = std::make_unique<OwnedWorkspace>(grid_size);
    return slot->ws;
}

void execute_c2r(FftWorkspace& ws)
{
    auto& p = plans_for(ws.grid_size);
    fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(ws.half), ws.real);
}

void execute_r2c(FftWorkspace& ws)
{
    auto& p = plans_for(ws.grid_size);
    fftw_execute_dft_r2c(p.r2c, ws.real, reinterpret_cast<fftw_complex*>(ws.half));
}

}  // namespace ac2d::detail
