// Copyright 2026 The mtsim Authors. All Rights Reserved.
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

#include <random>

#include <gtest/gtest.h>

#include "mtsim/config.h"
#include "mtsim/errors.h"
#include "mtsim/tag.h"

namespace mtsim {
namespace {

MtConfig Ts(unsigned ts, u64 tg = 16) {
  MtConfig cfg;
  cfg.ts = ts;
  cfg.tg = tg;
  return cfg;
}

TEST(ConfigTest, Presets) {
  EXPECT_EQ(MtConfig::AdiLike().tg, 64u);
  EXPECT_EQ(MtConfig::AdiLike().ts, 4u);
  EXPECT_EQ(MtConfig::HwasanLike().tg, 16u);
  EXPECT_EQ(MtConfig::HwasanLike().ts, 8u);
  EXPECT_NO_THROW(MtConfig::AdiLike().Validate());
  EXPECT_NO_THROW(MtConfig::HwasanLike().Validate());
}

TEST(ConfigTest, RejectsBadValues) {
  for (u64 tg : {0, 8, 24, 128}) EXPECT_THROW(Ts(8, tg).Validate(), UsageError);
  for (unsigned ts : {0, 2, 6, 16}) EXPECT_THROW(Ts(ts).Validate(), UsageError);
  MtConfig cfg;
  cfg.sampling_rate = 1.5;
  EXPECT_THROW(cfg.Validate(), UsageError);
  cfg.sampling_rate = 0.5;
  cfg.precision_ext = true;
  cfg.right_align = true;
  EXPECT_THROW(cfg.Validate(), UsageError);
}

TEST(TagTest, ReservedSet) {
  MtConfig cfg = Ts(4);
  EXPECT_EQ(cfg.TagCount(), 16u);
  EXPECT_EQ(cfg.UsableTagCount(), 15u);
  EXPECT_TRUE(IsReservedTag(Tag{0}, cfg));
  EXPECT_FALSE(IsReservedTag(Tag{15}, cfg));
  cfg.precision_ext = true;
  EXPECT_EQ(cfg.UsableTagCount(), 14u);
  EXPECT_TRUE(IsReservedTag(Tag{15}, cfg));
  EXPECT_EQ(PartialTag(cfg), Tag{15});
  for (unsigned i = 0; i < cfg.UsableTagCount(); ++i) {
    const Tag t = UsableTagAt(i, cfg);
    EXPECT_FALSE(IsReservedTag(t, cfg));
    EXPECT_EQ(UsableIndexOf(t, cfg), i);
  }
  EXPECT_THROW(UsableTagAt(14, cfg), UsageError);
}

TEST(TagTest, PackExamples) {
  EXPECT_EQ(Pack(0x1000, Tag{0}, Ts(8)).word, 0x1000u);
  EXPECT_EQ(Pack(0x1000, Tag{0xAB}, Ts(8)).word, 0xAB00'0000'0000'1000u);
  EXPECT_EQ(Pack(0x2000, Tag{0x7}, Ts(4)).word, 0x7000'0000'0000'2000u);
}

TEST(TagTest, PackRejectsOutOfRange) {
  EXPECT_THROW(Pack(0x1000, Tag{16}, Ts(4)), UsageError);
  EXPECT_THROW(Pack(kAddressLimit, Tag{1}, Ts(8)), UsageError);
  EXPECT_NO_THROW(Pack(kAddressLimit - 1, Tag{255}, Ts(8)));
}

TEST(TagTest, UnpackExamples) {
  auto [a1, t1] = Unpack(TaggedPtr{0xAB00'0000'0000'1000}, Ts(8));
  EXPECT_EQ(a1, 0x1000u);
  EXPECT_EQ(t1, Tag{0xAB});
  auto [a2, t2] = Unpack(TaggedPtr{0x1000}, Ts(8));
  EXPECT_EQ(a2, 0x1000u);
  EXPECT_EQ(t2, Tag{0});
  auto [a3, t3] = Unpack(TaggedPtr{0x7000'0000'0000'2000}, Ts(4));
  EXPECT_EQ(a3, 0x2000u);
  EXPECT_EQ(t3, Tag{7});
}

TEST(TagTest, RoundtripFuzz) {
  std::mt19937_64 rng(42);
  for (unsigned ts : {4u, 8u}) {
    const MtConfig cfg = Ts(ts);
    for (int i = 0; i < 100000; ++i) {
      const uptr addr = rng() & kAddressMask;
      const Tag tag{static_cast<u8>(rng() % cfg.TagCount())};
      const TaggedPtr p = Pack(addr, tag, cfg);
      auto [a, t] = Unpack(p, cfg);
      ASSERT_EQ(a, addr);
      ASSERT_EQ(t, tag);
      ASSERT_EQ(Pack(a, t, cfg), p);
      // Bits between the address and the tag stay clear.
      ASSERT_EQ(p.word & ~kAddressMask & ~(~u64{0} << (64 - ts)), 0u);
    }
  }
}

TEST(TagTest, GranuleIndex) {
  EXPECT_EQ(GranuleIndex(0, Ts(8, 16)), 0u);
  EXPECT_EQ(GranuleIndex(17, Ts(8, 16)), 1u);
  EXPECT_EQ(GranuleIndex(64, Ts(4, 64)), 1u);
}

TEST(TagTest, TagsMatch) {
  EXPECT_TRUE(TagsMatch(Tag{3}, Tag{0}));
  EXPECT_TRUE(TagsMatch(Tag{3}, Tag{3}));
  EXPECT_FALSE(TagsMatch(Tag{3}, Tag{4}));
  // An untagged pointer does not get into tagged memory.
  EXPECT_FALSE(TagsMatch(Tag{0}, Tag{4}));
}

TEST(TagTest, TagsMatchProperties) {
  for (unsigned p = 0; p < 256; ++p) {
    EXPECT_TRUE(TagsMatch(Tag{static_cast<u8>(p)}, Tag{0}));
    for (unsigned m = 1; m < 256; ++m) {
      const bool match = TagsMatch(Tag{static_cast<u8>(p)}, Tag{static_cast<u8>(m)});
      EXPECT_EQ(match, p == m);
    }
  }
}

TEST(TagTest, AdvanceKeepsTag) {
  const MtConfig cfg = Ts(8);
  const TaggedPtr p = Pack(0x1000, Tag{0x42}, cfg);
  EXPECT_EQ(Advance(p, 16, cfg).word, Pack(0x1010, Tag{0x42}, cfg).word);
  EXPECT_EQ(Advance(p, -1, cfg).word, Pack(0xfff, Tag{0x42}, cfg).word);
  EXPECT_THROW(Advance(p, -0x1001, cfg), UsageError);
  EXPECT_THROW(Advance(Pack(kAddressLimit - 1, Tag{1}, cfg), 1, cfg),
               UsageError);
}

}  // namespace
}  // namespace mtsim
