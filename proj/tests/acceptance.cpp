// Runs every verification block and prints one line per block; exits 0 only
// when all of them pass.
#include <cstdio>
#include <exception>

#include "dforms/verify.hpp"

int main() {
  int rc = 0;
  try {
    for (const dforms::CheckResult& r : dforms::verification_suite(0)) {
      if (r.pass)
        std::printf("[PASS] %s\n", r.name.c_str());
      else
        std::printf("[FAIL] %s: %s\n", r.name.c_str(), r.detail.c_str());
      if (!r.pass) rc = 1;
    }
  } catch (const std::exception& e) {
    std::printf("[FAIL] suite aborted: %s\n", e.what());
    return 2;
  }
  return rc;
}
