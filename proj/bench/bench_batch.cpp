// Serial vs OpenMP batch kernels. Usage: fbt_bench [sessions] [points]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "fbt/batch.hpp"
#include "fbt/phrases.hpp"

namespace {

template <class F>
double seconds(F&& f, int reps = 3) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %9.4f s   parallel %9.4f s   speedup %5.2fx\n", name,
              serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fbt;
  const std::size_t sessions = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 4000;
  const std::size_t points = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 2000000;
  std::printf("threads: %d, sessions: %zu, points: %zu\n", batch::max_threads(),
              sessions, points);

  const Layout layout = builtin_layout(MethodKind::Fti);
  const auto profile = derive_anchors(default_fingertips(), {}, layout);
  const auto phrases = generate_text_phrases(sessions, 1);
  const auto latency = parse_latency("uniform:300:1200", 9);

  std::vector<SessionLog> logs;
  logs.reserve(phrases.size());
  for (const auto& p : phrases) {
    logs.push_back(synthesize_session(p, layout, profile, latency, {.touch_payloads = true}));
  }

  std::size_t sink = 0;
  report("replay",
         seconds([&] { sink += batch::replay_serial(logs, layout, profile).size(); }),
         seconds([&] { sink += batch::replay_parallel(logs, layout, profile).size(); }));

  report("round trip",
         seconds([&] {
           sink += batch::round_trip_failures_serial(phrases, layout, profile, latency, true).size();
         }),
         seconds([&] {
           sink += batch::round_trip_failures_parallel(phrases, layout, profile, latency, true).size();
         }));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts(points);
  for (auto& p : pts) p = {u(rng), u(rng)};
  report("resolve",
         seconds([&] { sink += batch::resolve_serial(pts, profile).size(); }),
         seconds([&] { sink += batch::resolve_parallel(pts, profile).size(); }));

  return sink == 0 ? 1 : 0;
}
