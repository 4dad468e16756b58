#pragma once

#include <gtest/gtest.h>

#include "gen.hpp"

namespace wt_test {

#define EXPECT_VEC_NEAR(a, b, tol) EXPECT_LE(::wt_test::max_diff((a), (b)), (tol))

template <typename F>
void expect_error(F&& f, ErrorKind kind) {
  try {
    f();
    ADD_FAILURE() << "expected error " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace wt_test
