#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <atomic>
#include <cstdio>

#include "lbcalc/germ.hpp"

namespace {

std::atomic<long> g_checked{0};
std::atomic<long> g_broken{0};

// Every germ built anywhere in a test binary must satisfy sup <= d / n.
void audit(const lbcalc::germ::Germ& g) {
  ++g_checked;
  if (!(lbcalc::germ::sup_norm(g) <= lbcalc::germ::d_norm(g) / g.index())) ++g_broken;
}

}  // namespace

int main(int argc, char** argv) {
  lbcalc::germ::set_construction_hook(&audit);
  doctest::Context context(argc, argv);
  int status = context.run();
  if (context.shouldExit()) return status;
  if (g_broken.load() != 0) {
    std::fprintf(stderr, "germ audit: %ld of %ld constructed germs break sup <= d/n\n", g_broken.load(),
                 g_checked.load());
    status = 1;
  }
  return status;
}
