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


// Reference vs OpenMP geometry kernels. Thread count follows OMP_NUM_THREADS.
//   rotguard_bench --benchmark_filter=Rotate

#include <benchmark/benchmark.h>

#include <cstdint>

#include "rotguard/geometry.hpp"
#include "rotguard/image.hpp"

using namespace rotguard;

namespace {

Image gradient(int w, int h) {
  Image img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::uint8_t* px = img.pixel(x, y);
      px[0] = static_cast<std::uint8_t>(20 + (x * 200) / w);
      px[1] = static_cast<std::uint8_t>(20 + (y * 200) / h);
      px[2] = static_cast<std::uint8_t>(20 + ((x + y) * 100) / (w + h));
    }
  }
  return img;
}

template <bool Reference>
void BM_Rotate(benchmark::State& state) {
  const Image img = gradient(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)) * 3 / 4);
  const AngleDeg angle(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    Image out = Reference ? geometry::reference::rotate_with_pad(img, angle) : geometry::rotate_with_pad(img, angle);
    benchmark::DoNotOptimize(out.bytes().data());
  }
  state.SetItemsProcessed(state.iterations() * img.width() * img.height());
}

template <bool Reference>
void BM_Resize(benchmark::State& state) {
  const Image img = gradient(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)) * 3 / 4);
  for (auto _ : state) {
    Image out = Reference ? geometry::reference::resize(img, 224, 224) : geometry::resize(img, 224, 224);
    benchmark::DoNotOptimize(out.bytes().data());
  }
}

template <bool Reference>
void BM_Trim(benchmark::State& state) {
  const Image padded = geometry::rotate_with_pad(gradient(static_cast<int>(state.range(0)),
                                                          static_cast<int>(state.range(0)) * 3 / 4),
                                                 AngleDeg(37));
  for (auto _ : state) {
    Image out = Reference ? geometry::reference::trim_black_padding(padded) : geometry::trim_black_padding(padded);
    benchmark::DoNotOptimize(out.bytes().data());
  }
}

}  // namespace

BENCHMARK_TEMPLATE(BM_Rotate, true)->Name("Rotate/reference")->Args({640, 37})->Args({1920, 37})->Args({1920, 90});
BENCHMARK_TEMPLATE(BM_Rotate, false)->Name("Rotate/omp")->Args({640, 37})->Args({1920, 37})->Args({1920, 90});
BENCHMARK_TEMPLATE(BM_Resize, true)->Name("Resize/reference")->Arg(640)->Arg(1920);
BENCHMARK_TEMPLATE(BM_Resize, false)->Name("Resize/omp")->Arg(640)->Arg(1920);
BENCHMARK_TEMPLATE(BM_Trim, true)->Name("Trim/reference")->Arg(640)->Arg(1920);
BENCHMARK_TEMPLATE(BM_Trim, false)->Name("Trim/omp")->Arg(640)->Arg(1920);

BENCHMARK_MAIN();
