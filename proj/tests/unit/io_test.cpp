// Copyright 2026 The cicreg Authors
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

#include <zlib.h>

#include <cstring>
#include <filesystem>

#include "io.hpp"
#include "support/nifti_bytes.hpp"
#include "support/synthetic.hpp"

using namespace cicreg;
namespace fs = std::filesystem;
using synth::nifti_bytes;
using synth::put;

namespace {

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("cicreg_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(IoTest, MvolVolumeRoundTripIsBitExact) {
  Volume v = synth::random_volume({5, 6, 7}, 21);
  v.set_spacing({0.5, 1.25, 3.0});
  save_volume(v, path("v.mvol"));
  EXPECT_EQ(load_volume(path("v.mvol")), v);
}

TEST_F(IoTest, MvolFieldRoundTripIsBitExact) {
  DisplacementField u = synth::smooth_random_field({4, 5, 6}, 3, 2.0);
  for (double& x : u.raw()) x = static_cast<float>(x);
  save_field(u, path("u.mvol"));
  const DisplacementField back = load_field(path("u.mvol"));
  EXPECT_EQ(back, u);
}

TEST_F(IoTest, MvolHeaderLayout) {
  RawImage img{{2, 1, 1}, 1, {1, 1, 1}, {1.0f, -2.0f}, std::nullopt};
  const auto bytes = encode_mvol(img);
  ASSERT_EQ(std::memcmp(bytes.data(), "MVOL1\0\0\0", 8), 0);
  std::uint32_t h;
  std::memcpy(&h, bytes.data() + 8, 4);
  const std::string header(bytes.begin() + 12, bytes.begin() + 12 + h);
  EXPECT_EQ(header, R"({"dims":[2,1,1],"channels":1,"spacing":[1.0,1.0,1.0],"dtype":"f32le"})");
  EXPECT_EQ(bytes.size(), 12 + h + 8);
}

TEST_F(IoTest, TruncatedMvolNamesByteCounts) {
  auto bytes = encode_mvol(RawImage{{2, 2, 2}, 1, {}, std::vector<float>(8, 1.0f), std::nullopt});
  bytes.resize(bytes.size() - 5);
  try {
    decode_mvol(bytes);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("27 bytes"), std::string::npos) << msg;
    EXPECT_NE(msg.find("expected 32"), std::string::npos) << msg;
    EXPECT_NE(msg.find("byte offset"), std::string::npos) << msg;
  }
}

TEST_F(IoTest, BadMagicIsFormatErrorAtZero) {
  std::vector<std::uint8_t> bytes(40, 0);
  try {
    decode_mvol(bytes);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }
}

TEST_F(IoTest, NonFinitePayloadRejected) {
  auto bytes = encode_mvol(RawImage{{2, 1, 1}, 1, {}, {0.0f, 0.0f}, std::nullopt});
  const float nan = NAN;
  std::memcpy(bytes.data() + bytes.size() - 4, &nan, 4);
  EXPECT_THROW(decode_mvol(bytes), FormatError);
}

TEST_F(IoTest, NiftiScalingAppliedByHand) {
  std::vector<std::uint8_t> payload(2);
  std::int16_t three = 3;
  std::memcpy(payload.data(), &three, 2);
  const RawImage img = decode_nifti(nifti_bytes({1, 1, 1}, 4, 16, 2.0f, 1.0f, payload));
  ASSERT_EQ(img.data.size(), 1u);
  EXPECT_EQ(img.data[0], 7.0f);
  EXPECT_EQ(img.spacing, (Spacing{1.5, 2.0, 2.5}));
}

TEST_F(IoTest, NiftiZeroSlopeMeansUnscaled) {
  const RawImage img = decode_nifti(nifti_bytes({2, 1, 1}, 2, 8, 0.0f, 5.0f, {4, 200}));
  EXPECT_EQ(img.data, (std::vector<float>{4.0f, 200.0f}));
}

TEST_F(IoTest, NiftiUint8Scaled) {
  const RawImage img = decode_nifti(nifti_bytes({3, 1, 1}, 2, 8, 0.5f, -1.0f, {0, 2, 255}));
  EXPECT_EQ(img.data, (std::vector<float>{-1.0f, 0.0f, 126.5f}));
}

TEST_F(IoTest, NiftiBigEndianFloat32) {
  std::vector<std::uint8_t> payload(8);
  const float vals[2] = {1.5f, -4.0f};
  for (int i = 0; i < 2; ++i) {
    std::uint8_t t[4];
    std::memcpy(t, &vals[i], 4);
    std::reverse(t, t + 4);
    std::memcpy(payload.data() + 4 * i, t, 4);
  }
  const RawImage img = decode_nifti(nifti_bytes({2, 1, 1}, 16, 32, 1.0f, 0.0f, payload, true));
  EXPECT_EQ(img.data, (std::vector<float>{1.5f, -4.0f}));
}

TEST_F(IoTest, NiftiUnsupportedDatatypeReportsOffset) {
  try {
    decode_nifti(nifti_bytes({1, 1, 1}, 64, 64, 1.0f, 0.0f, std::vector<std::uint8_t>(8)));
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 70u);
  }
}

TEST_F(IoTest, NiftiShortPayload) {
  EXPECT_THROW(decode_nifti(nifti_bytes({2, 2, 2}, 16, 32, 1.0f, 0.0f, std::vector<std::uint8_t>(12))), FormatError);
}

TEST_F(IoTest, NiftiVolumeRoundTrip) {
  Volume v = synth::random_volume({4, 3, 5}, 8);
  v.set_spacing({1.0, 2.0, 0.5});
  save_volume(v, path("v.nii"));
  EXPECT_EQ(load_volume(path("v.nii")), v);
  save_volume(v, path("v.nii.gz"));
  EXPECT_EQ(load_volume(path("v.nii.gz")), v);
}

TEST_F(IoTest, NiftiGzIsGzip) {
  save_volume(Volume(Dims{2, 2, 2}, {}, 1.0f), path("v.nii.gz"));
  const auto raw = read_file(path("v.nii.gz"));
  ASSERT_GE(raw.size(), 2u);
  EXPECT_EQ(raw[0], 0x1f);
  EXPECT_EQ(raw[1], 0x8b);
}

TEST_F(IoTest, NiftiFieldIsFiveDimVector) {
  DisplacementField u = synth::smooth_random_field({3, 4, 5}, 2, 1.0);
  for (double& x : u.raw()) x = static_cast<float>(x);
  save_field(u, path("u.nii"));
  const auto bytes = read_file(path("u.nii"));
  std::int16_t dim[8], intent;
  std::memcpy(dim, bytes.data() + 40, 16);
  std::memcpy(&intent, bytes.data() + 68, 2);
  EXPECT_EQ(dim[0], 5);
  EXPECT_EQ(dim[4], 1);
  EXPECT_EQ(dim[5], 3);
  EXPECT_EQ(intent, 1007);
  EXPECT_EQ(load_field(path("u.nii")), u);
}

TEST_F(IoTest, ChannelCountsEnforced) {
  save_volume(Volume(Dims{2, 2, 2}), path("v.mvol"));
  EXPECT_THROW(load_field(path("v.mvol")), InvalidInput);
  save_field(DisplacementField(Dims{2, 2, 2}), path("u.mvol"));
  EXPECT_THROW(load_volume(path("u.mvol")), InvalidInput);
}

TEST_F(IoTest, MissingFileIsIoError) { EXPECT_THROW(load_volume(path("absent.mvol")), IoError); }

TEST_F(IoTest, UnknownExtension) {
  EXPECT_THROW(load_volume(path("v.png")), FormatError);
  EXPECT_THROW(save_volume(Volume(Dims{1, 1, 1}), path("v.png")), InvalidInput);
}

TEST_F(IoTest, FailedWriteLeavesNoFile) {
  const std::string target = path("missing_dir/v.mvol");
  EXPECT_THROW(save_volume(Volume(Dims{1, 1, 1}), target), IoError);
  EXPECT_FALSE(fs::exists(target));
  for (const auto& e : fs::directory_iterator(dir_)) ADD_FAILURE() << "leftover " << e.path();
}

TEST_F(IoTest, GeometryPreservedThroughNifti) {
  Volume v(Dims{2, 2, 2});
  NiftiGeometry g;
  g.qform_code = 1;
  g.sform_code = 2;
  g.quatern = {0.1f, 0.2f, 0.3f};
  g.qoffset = {-10.0f, 5.0f, 2.0f};
  g.srow[0] = {1.0f, 0.0f, 0.0f, -10.0f};
  g.qfac = -1.0f;
  v.geometry = g;
  save_volume(v, path("g.nii"));
  const Volume back = load_volume(path("g.nii"));
  ASSERT_TRUE(back.geometry.has_value());
  EXPECT_EQ(back.geometry->qform_code, 1);
  EXPECT_EQ(back.geometry->sform_code, 2);
  EXPECT_EQ(back.geometry->srow[0][3], -10.0f);
  EXPECT_EQ(back.geometry->qfac, -1.0f);
}
