// Copyright 2026 The tabilp Authors
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


// Writes a synthetic suite for the command-line tests:
//   make_suite <dir> <seed> <questions>

#include <cstdlib>
#include <iostream>
#include <string>

#include "synthetic.hpp"

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: make_suite <dir> <seed> <questions>\n";
    return 1;
  }
  const auto suite = tabilp::testing::MakeSuite(std::strtoull(argv[2], nullptr, 10),
                                                std::strtoull(argv[3], nullptr, 10));
  tabilp::testing::WriteSuite(suite, argv[1]);
  return 0;
}
