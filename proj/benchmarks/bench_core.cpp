#include <benchmark/benchmark.h>

#include "xphase/brackets.hpp"
#include "xphase/dirac.hpp"
#include "xphase/lift.hpp"
#include "xphase/parser.hpp"
#include "xphase/wigner.hpp"

namespace {

using namespace xphase;

ContextPtr ctx1() {
    static ContextPtr ctx = SymplecticContext::standard(1);
    return ctx;
}

void BM_PolyMultiply(benchmark::State& state) {
    Poly a = parse("(q^3 + 2*p^2 + hbar*q*p + 1/3*l_q^2)^2", ctx1());
    Poly b = parse("(p^3 - q*p + 5 + hbar^2*l_p)^2", ctx1());
    for (auto _ : state) {
        benchmark::DoNotOptimize(a * b);
    }
}
BENCHMARK(BM_PolyMultiply);

void BM_ParseFormatRoundTrip(benchmark::State& state) {
    Poly a = parse("(q^2 + p^2 + q*p + hbar)^3", ctx1());
    std::string text = a.str();
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse(text, ctx1()));
    }
}
BENCHMARK(BM_ParseFormatRoundTrip);

void BM_ExtendedPoissonBracket(benchmark::State& state) {
    Poly f = parse("q^2*l_q + p^2*l_p + i*c0*cb1*q", ctx1());
    Poly g = lift_classical(parse("1/2*p^2+1/4*q^4", ctx1()));
    for (auto _ : state) {
        benchmark::DoNotOptimize(epb(f, g));
    }
}
BENCHMARK(BM_ExtendedPoissonBracket);

void BM_MoyalBracketDegree6(benchmark::State& state) {
    Poly f = parse("q^6 + q^3*p^3", ctx1());
    Poly g = parse("p^6 + q^2*p^4", ctx1());
    for (auto _ : state) {
        benchmark::DoNotOptimize(moyal(f, g));
    }
}
BENCHMARK(BM_MoyalBracketDegree6);

void BM_DiracPipelineQuartic(benchmark::State& state) {
    Poly h = parse("1/2*p^2+1/4*q^4", ctx1());
    Poly q = parse("q", ctx1());
    for (auto _ : state) {
        ConstraintAnalysis analysis = consistency_iteration(h);
        benchmark::DoNotOptimize(constrained_evolution(q, analysis));
    }
}
BENCHMARK(BM_DiracPipelineQuartic);

void BM_WignerTransform(benchmark::State& state) {
    HermiteState hermite{1, 1.0};
    GridWavefunction wf = hermite.sample(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(wigner_transform(wf));
    }
}
BENCHMARK(BM_WignerTransform)->Arg(129)->Arg(257);

}  // namespace

BENCHMARK_MAIN();
