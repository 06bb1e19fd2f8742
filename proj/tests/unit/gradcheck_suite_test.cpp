// Copyright 2026 The IGAF Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "igaf/error.hpp"
#include "igaf/gradcheck_suite.hpp"

namespace igaf {
namespace {

TEST(GradCheckSuite, EveryBlockPasses) {
  const auto results = run_gradcheck_suite();
  ASSERT_EQ(results.size(), gradcheck_block_names().size());
  for (const auto& r : results) {
    EXPECT_LT(r.max_rel_error, kGradCheckTolerance) << r.block;
  }
}

TEST(GradCheckSuite, SingleBlockAndUnknownName) {
  const auto saf = run_gradcheck_suite("saf");
  ASSERT_EQ(saf.size(), 1u);
  EXPECT_EQ(saf[0].block, "saf");
  EXPECT_TRUE(saf[0].passed());
  EXPECT_THROW(run_gradcheck_suite("transformer"), ConfigError);
}

TEST(GradCheckSuite, CoversTheRequiredBlocks) {
  const auto names = gradcheck_block_names();
  for (const char* required : {"conv2d", "linear", "leaky_relu", "relu", "sigmoid",
                               "global_avg_pool", "ca", "fe", "wf", "saf", "igaf", "refine",
                               "model"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), required), names.end()) << required;
  }
}

}  // namespace
}  // namespace igaf
