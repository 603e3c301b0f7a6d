#include <benchmark/benchmark.h>

#include "onc/knowledge_matrix.hpp"
#include "onc/random.hpp"

namespace {

using namespace onc;

// A chain of overlapping combinations of width `range(0)`, closed by uncoded tails.
void BM_InsertChain(benchmark::State& state) {
  const auto& f = GaloisField::of(8);
  const PacketId width = static_cast<PacketId>(state.range(0));
  const PacketId packets = 512;
  Rng rng(1);
  std::vector<CodedPacket> stream;
  for (PacketId lo = 0; lo + width <= packets; ++lo) {
    CodedPacket pkt;
    for (PacketId p = lo; p < lo + width; ++p) pkt.terms.push_back(Term{p, Symbol(1 + uniform_below(rng, 255))});
    stream.push_back(std::move(pkt));
  }
  for (PacketId p = packets - width + 1; p < packets; ++p) stream.push_back(CodedPacket::uncoded(p));
  for (auto _ : state) {
    KnowledgeMatrix k(f);
    for (const auto& pkt : stream) k.insert(pkt);
    benchmark::DoNotOptimize(k.decoded_count());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(stream.size()));
}
BENCHMARK(BM_InsertChain)->Arg(2)->Arg(4)->Arg(8);

void BM_IsInnovative(benchmark::State& state) {
  const auto& f = GaloisField::of(8);
  KnowledgeMatrix k(f);
  for (PacketId p = 0; p + 1 < 200; ++p) k.insert(CodedPacket{{Term{p, 1}, Term{p + 1, 3}}});
  const CodedPacket probe{{Term{100, 5}, Term{150, 9}, Term{199, 1}}};
  for (auto _ : state) benchmark::DoNotOptimize(k.is_innovative(probe));
}
BENCHMARK(BM_IsInnovative);

}  // namespace
