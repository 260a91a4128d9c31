// Copyright 2026 The homoglab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <string>

#include "homoglab/config.hpp"
#include "homoglab/error.hpp"

namespace homoglab {
namespace {

#ifndef HOMOGLAB_CONFIG_DIR
#define HOMOGLAB_CONFIG_DIR "configs"
#endif

std::string cfg(const char* name) { return std::string(HOMOGLAB_CONFIG_DIR) + "/" + name; }

TEST(Config, ShippedConfigsLoad) {
  Config w = load_config(cfg("wiggly.toml"));
  ASSERT_TRUE(w.field);
  EXPECT_EQ(w.field->kind(), FieldKind::MultiScale);
  EXPECT_EQ(w.run.eps, (std::vector<double>{0.1, 0.03, 0.01}));
  EXPECT_EQ(w.run.c, (std::vector<double>{1.5}));

  Config q = load_config(cfg("qp_cosine.toml"));
  ASSERT_TRUE(q.field && q.field->qp());
  EXPECT_EQ(q.field->qp()->modes().size(), 5u);  // conjugates completed
  EXPECT_DOUBLE_EQ(q.field->qp()->c_xi().value(), 0.5);

  Config c = load_config(cfg("coupled_sine.toml"));
  ASSERT_TRUE(c.coupled);
  EXPECT_DOUBLE_EQ(c.coupled->a2, 3.0);

  Config s = load_config(cfg("transport_shear.toml"));
  ASSERT_TRUE(s.field && s.transport && s.highdim);
  EXPECT_EQ(s.field->dimension(), 2);
  EXPECT_EQ(s.transport->grid.size(), 2u);
  EXPECT_DOUBLE_EQ(s.transport->lip_phi, 2.0);

  for (const char* n : {"shear_golden.toml", "transport_harmonic.toml"})
    EXPECT_NO_THROW(load_config(cfg(n))) << n;
}

TEST(Config, Errors) {
  try {
    parse_config("[field\nkind = 1", "bad.toml");
    FAIL();
  } catch (const ConfigError& e) {
    std::string m = e.what();
    
    EXPECT_NE(m.find("bad.toml:1:"), std::string::npos) << m;
  }
  EXPECT_THROW(parse_config("[field]\nkind = \"weird\"\ndimension = 1\ncomponents = [\"r\"]"),
               ConfigError);
  EXPECT_THROW(parse_config("[field]\nkind = \"single-scale\"\ndimension = 2\ncomponents = [\"r\"]"),
               ConfigError);
  EXPECT_THROW(load_config("/nonexistent/x.toml"), ConfigError);
}

}  // namespace
}  // namespace homoglab
