/* Copyright 2026 The rotguard Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */


#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <atomic>
#include <thread>

#include "../support/test_images.hpp"
#include "rotguard/errors.hpp"
#include "rotguard/predictor.hpp"

using namespace rotguard;
using namespace rotguard::pipeline;
using rotguard::testing::smooth_image;
using rotguard::testing::TempDir;

namespace {

const std::filesystem::path kData = ROTGUARD_TEST_DATA;

PredictContext ctx(const std::string& id, int pass = 1, int prior = 0) { return {id, pass, AngleDeg(prior)}; }

Image constant(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  Image img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      img.pixel(x, y)[0] = r;
      img.pixel(x, y)[1] = g;
      img.pixel(x, y)[2] = b;
    }
  return img;
}

class SizeSpy final : public AnglePredictor {
 public:
  geometry::Size input_size() const override { return {32, 24}; }
  AngleDeg predict(const Image& in, const PredictContext&) const override {
    seen_w = in.width();
    seen_h = in.height();
    return AngleDeg(5);
  }
  mutable int seen_w = 0, seen_h = 0;
};

}  // namespace

TEST_CASE("oracle without errors returns the recorded rotation") {
  OraclePredictor o;
  o.record("img", AngleDeg(117));
  const Image in(224, 224);
  CHECK(o.predict(in, ctx("img")).value() == 117);
  // After acting on a prediction the oracle reports what is left.
  CHECK(o.predict(in, ctx("img", 2, 117)).value() == 0);
  CHECK(o.predict(in, ctx("img", 2, 100)).value() == 17);
  CHECK_THROWS_AS(o.predict(in, ctx("other")), OracleMiss);
  o.record("img", AngleDeg(3));
  CHECK(o.predict(in, ctx("img")).value() == 3);
}

TEST_CASE("oracle flip180") {
  OracleErrorMode m;
  m.kind = OracleErrorKind::Flip180;
  OraclePredictor always(m);
  always.record("s", AngleDeg(30));
  const Image in(4, 4);
  CHECK(always.predict(in, ctx("s")).value() == 210);
  CHECK(always.predict(in, ctx("s", 2, 210)).value() == 0);  // flips the 180 residual back to 0

  m.only_pass = 1;
  OraclePredictor first_only(m);
  first_only.record("s", AngleDeg(30));
  CHECK(first_only.predict(in, ctx("s", 1)).value() == 210);
  CHECK(first_only.predict(in, ctx("s", 2, 210)).value() == 180);

  m.only_pass = 0;
  m.probability = 0.0;
  OraclePredictor never(m);
  never.record("s", AngleDeg(30));
  CHECK(never.predict(in, ctx("s")).value() == 30);

  // p = 0.5: about half the subjects flip; each answer is stable.
  m.probability = 0.5;
  OraclePredictor half(m, 7);
  int flipped = 0;
  for (int i = 0; i < 2000; ++i) {
    const std::string id = "s" + std::to_string(i);
    half.record(id, AngleDeg(10));
    const int a = half.predict(in, ctx(id)).value();
    REQUIRE((a == 10 || a == 190));
    REQUIRE(half.predict(in, ctx(id)).value() == a);
    flipped += a == 190;
  }
  CHECK(flipped > 900);
  CHECK(flipped < 1100);
}

TEST_CASE("oracle jitter is seeded and centred") {
  OracleErrorMode m;
  m.kind = OracleErrorKind::GaussianJitter;
  m.sigma = 5.0;
  OraclePredictor a(m, 1), b(m, 1), c(m, 2);
  const Image in(4, 4);
  double sum = 0, sq = 0;
  int differ = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const std::string id = "j" + std::to_string(i);
    a.record(id, AngleDeg(90));
    b.record(id, AngleDeg(90));
    c.record(id, AngleDeg(90));
    const int pa = a.predict(in, ctx(id)).value();
    REQUIRE(pa == b.predict(in, ctx(id)).value());
    differ += pa != c.predict(in, ctx(id)).value();
    const int err = pa - 90;
    sum += err;
    sq += err * err;
  }
  CHECK(std::abs(sum / n) < 0.5);
  CHECK(std::sqrt(sq / n) == doctest::Approx(5.0).epsilon(0.1));
  CHECK(differ > n / 2);
}

TEST_CASE("oracle parameter checks") {
  OracleErrorMode m;
  m.probability = 1.5;
  CHECK_THROWS_AS(OraclePredictor{m}, ConfigError);
  m.probability = 1.0;
  m.sigma = -1;
  CHECK_THROWS_AS(OraclePredictor{m}, ConfigError);
}

TEST_CASE("predict_angle hands the predictor a resized copy") {
  SizeSpy spy;
  CHECK(predict_angle(spy, smooth_image(100, 40)).value() == 5);
  CHECK(spy.seen_w == 32);
  CHECK(spy.seen_h == 24);
}

TEST_CASE("model predictor: load, predict, preprocessing") {
  const ModelPredictor m(kData / "probe360.onnx");
  CHECK(m.input_size() == geometry::Size{224, 224});
  CHECK(m.predict(Image(224, 224), {}).value() == 117);
  CHECK(predict_angle(m, smooth_image(300, 200)).value() == 117);

  // Logits 0..2 are the channel means after (p - mean) * scale.
  const auto l = m.logits(constant(224, 224, 255, 51, 0));
  REQUIRE(l.size() == 360);
  CHECK(l[0] == doctest::Approx(1.0));
  CHECK(l[1] == doctest::Approx(0.2).epsilon(1e-3));  // float pooling over 50k values
  CHECK(l[2] == doctest::Approx(0.0));
  CHECK(l[117] == doctest::Approx(10.0));
  CHECK_THROWS_AS(m.logits(Image(10, 10)), ShapeError);

  ModelSidecar s;
  s.bgr = true;
  s.mean = {10.f, 20.f, 30.f};
  s.scale = {0.5f, 0.25f, 2.0f};
  const ModelPredictor bgr(kData / "probe360.onnx", s);
  const auto lb = bgr.logits(constant(224, 224, 40, 60, 80));
  // BGR feeds blue first: (80-10)*0.5, (60-20)*0.25, (40-30)*2.
  CHECK(lb[0] == doctest::Approx(35.0));
  CHECK(lb[1] == doctest::Approx(10.0));
  CHECK(lb[2] == doctest::Approx(20.0));
  CHECK(bgr.predict(constant(224, 224, 40, 60, 80), {}).value() == 0);  // logit 0 beats the bias now
}

TEST_CASE("model predictor: NHWC layout") {
  ModelSidecar s;
  s.layout = ModelSidecar::Layout::NHWC;
  const ModelPredictor nhwc(kData / "probe360_nhwc.onnx", s);
  const ModelPredictor nchw(kData / "probe360.onnx");
  const Image img = smooth_image(224, 224);
  const auto a = nhwc.logits(img), b = nchw.logits(img);
  for (int i = 0; i < 360; ++i) REQUIRE(a[i] == doctest::Approx(b[i]).epsilon(1e-5));
  CHECK(nhwc.predict(img, {}).value() == 117);
}

TEST_CASE("model predictor: invert_prediction") {
  ModelSidecar s;
  s.invert_prediction = true;
  const ModelPredictor m(kData / "probe360.onnx", s);
  CHECK(m.predict(Image(224, 224), {}).value() == 243);
}

TEST_CASE("model predictor: sidecar file next to the model") {
  TempDir dir;
  const auto model = dir / "orient.onnx";
  std::filesystem::copy_file(kData / "probe360.onnx", model);
  CHECK(default_sidecar_path(model) == dir / "orient.onnx.json");
  CHECK(ModelPredictor(model).predict(Image(224, 224), {}).value() == 117);

  std::ofstream(default_sidecar_path(model)) << R"({"layout":"NCHW","mean":[0,0,0],"scale":[1,1,1],
                                                   "invert_prediction":true})";
  const ModelPredictor m(model);
  CHECK(m.sidecar().invert_prediction);
  CHECK(m.sidecar().scale[0] == 1.0f);
  CHECK(m.predict(Image(224, 224), {}).value() == 243);

  std::ofstream(default_sidecar_path(model)) << "{not json";
  CHECK_THROWS_AS(ModelPredictor{model}, ModelLoadError);
}

TEST_CASE("sidecar JSON") {
  ModelSidecar s;
  s.layout = ModelSidecar::Layout::NHWC;
  s.bgr = true;
  s.mean = {1, 2, 3};
  s.invert_prediction = true;
  s.input_width = 128;
  const ModelSidecar back = ModelSidecar::from_json(s.to_json());
  CHECK(back.layout == s.layout);
  CHECK(back.bgr);
  CHECK(back.mean == s.mean);
  CHECK(back.scale == s.scale);
  CHECK(back.invert_prediction);
  CHECK(back.input_width == 128);
  CHECK(back.input_height == 224);

  CHECK_THROWS_AS(ModelSidecar::from_json(nlohmann::json::parse(R"({"layout":"CHW"})")), ModelLoadError);
  CHECK_THROWS_AS(ModelSidecar::from_json(nlohmann::json::parse(R"({"mean":[1,2]})")), ModelLoadError);
  CHECK_THROWS_AS(ModelSidecar::from_json(nlohmann::json::parse(R"({"channel_order":"GBR"})")), ModelLoadError);
  CHECK_THROWS_AS(ModelSidecar::from_json(nlohmann::json::parse(R"({"input_width":0})")), ModelLoadError);
  CHECK_THROWS_AS(ModelSidecar::from_json(nlohmann::json::parse(R"({"invert_prediction":"yes"})")), ModelLoadError);
}

TEST_CASE("model predictor: load failures") {
  TempDir dir;
  CHECK_THROWS_AS(ModelPredictor(dir / "missing.onnx"), ModelLoadError);
  std::ofstream(dir / "junk.onnx") << "definitely not protobuf";
  CHECK_THROWS_AS(ModelPredictor(dir / "junk.onnx"), ModelLoadError);
  // Wrong output length is caught before any prediction.
  CHECK_THROWS_AS(ModelPredictor(kData / "probe10.onnx"), ShapeError);
  try {
    ModelPredictor bad(kData / "probe10.onnx");
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).find("10") != std::string::npos);
  }
}

TEST_CASE("model predictor is safe for concurrent predictions") {
  const ModelPredictor m(kData / "probe360.onnx");
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      const Image img = smooth_image(224, 224, t);
      for (int i = 0; i < 5; ++i) ok += m.predict(img, {}).value() == 117;
    });
  }
  for (auto& t : threads) t.join();
  CHECK(ok.load() == 20);
}
