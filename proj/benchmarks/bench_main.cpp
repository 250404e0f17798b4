#include <benchmark/benchmark.h>

// Our own main: the distro's benchmark_main archive carries LTO bytecode
// from a different compiler release and fails to link.
BENCHMARK_MAIN();
