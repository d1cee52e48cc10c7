// Copyright 2026 The seloc Authors
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

#pragma once

#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "catalog/catalog.hpp"
#include "catalog/vocabulary.hpp"
#include "matchmaker/matchmaker.hpp"
#include "sparql/query.hpp"

namespace seloc::testutil::matchmaker {

const std::string kSosa = "http://tinyml-schema.org/sosa_extend#";

struct Kg {
  std::vector<catalog::ModelManifest> models;
  std::vector<catalog::DeviceManifest> devices;
  rdf::Dataset dataset;
};

// Capacities drawn from a small pool so equal bounds occur often.
inline Kg randomKg(std::mt19937& rng) {
  static const std::vector<std::string> classes = {"Camera", "DepthCamera", "Accelerometer",
                                                   "Gyroscope", "Microphone", "Thermometer"};
  static const std::vector<double> ram = {16, 32, 94, 121, 144, 172, 256};
  static const std::vector<double> flash = {64, 128, 600, 610, 621, 628, 1024};
  std::uniform_int_distribution<int> d(0, 1 << 16);
  Kg kg;
  rdf::Graph models("urn:seloc:graph:models"), devices("urn:seloc:graph:devices");
  const int nm = d(rng) % 11, nd = d(rng) % 11;
  for (int i = 0; i < nm; ++i) {
    catalog::ModelManifest m;
    m.uuid = "m" + std::to_string(i);
    m.name = m.uuid;
    m.description = "random model";
    m.macs = d(rng);
    m.minRam = ram[d(rng) % ram.size()];
    m.minFlash = flash[d(rng) % flash.size()];
    m.unit = vocab::kKilobyte;
    std::set<std::string> picked;
    const int ni = 1 + d(rng) % 3;
    for (int k = 0; k < ni; ++k) picked.insert(kSosa + classes[d(rng) % classes.size()]);
    for (const auto& c : picked) m.inputs.push_back({c, std::nullopt});
    models.merge(catalog::compileModelManifest(m, models.name()));
    kg.models.push_back(m);
  }
  for (int i = 0; i < nd; ++i) {
    catalog::DeviceManifest dev;
    dev.id = "d" + std::to_string(i);
    dev.name = dev.id;
    dev.ram = ram[d(rng) % ram.size()];
    dev.flash = flash[d(rng) % flash.size()];
    dev.unit = vocab::kKilobyte;
    std::set<std::string> picked;
    const int ns = d(rng) % 4;
    for (int k = 0; k < ns; ++k) picked.insert(kSosa + classes[d(rng) % classes.size()]);
    dev.sensors.assign(picked.begin(), picked.end());
    devices.merge(catalog::compileDeviceManifest(dev, devices.name()));
    kg.devices.push_back(dev);
  }
  kg.dataset.putGraph(models);
  kg.dataset.putGraph(devices);
  return kg;
}

using Pairs = std::set<std::pair<std::string, std::string>>;  // (model uuid, device id)

// Oracle with its own subclass table: a DepthCamera satisfies a Camera input.
inline Pairs bruteForce(const Kg& kg) {
  auto satisfies = [](const std::string& offered, const std::string& needed) {
    return offered == needed || (offered == kSosa + "DepthCamera" && needed == kSosa + "Camera");
  };
  Pairs out;
  for (const auto& m : kg.models) {
    for (const auto& dev : kg.devices) {
      if (m.minRam > dev.ram || m.minFlash > dev.flash) continue;
      bool ok = true;
      for (const auto& in : m.inputs) {
        bool any = false;
        for (const auto& s : dev.sensors) any = any || satisfies(s, in.sensorClass);
        ok = ok && any;
      }
      if (ok) out.insert({m.uuid, dev.id});
    }
  }
  return out;
}

inline Pairs traversal(const Kg& kg, bool byDevice) {
  Pairs out;
  if (byDevice) {
    for (const auto& dev : kg.devices) {
      for (const auto& r : match::modelsForDevice(kg.dataset, dev.id)) out.insert({r.modelUuid, r.deviceId});
    }
  } else {
    for (const auto& m : kg.models) {
      for (const auto& r : match::devicesForModel(kg.dataset, m.uuid)) out.insert({r.modelUuid, r.deviceId});
    }
  }
  return out;
}

inline Pairs compiled(const Kg& kg, bool byDevice) {
  const auto models = catalog::extractModels(kg.dataset);
  const auto devices = catalog::extractDevices(kg.dataset);
  Pairs out;
  if (byDevice) {
    for (const auto& dev : devices.devices) {
      auto q = match::compileMatchQuery(match::Direction::ModelsForDevice, match::constraintsFor(dev));
      auto table = sparql::evaluate(kg.dataset, sparql::parseQuery(q));
      for (const auto& row : table.rows) out.insert({row[0]->value(), dev.id});
    }
  } else {
    for (const auto& m : models.models) {
      auto q = match::compileMatchQuery(match::Direction::DevicesForModel, match::constraintsFor(m));
      auto table = sparql::evaluate(kg.dataset, sparql::parseQuery(q));
      for (const auto& row : table.rows) {
        out.insert({m.uuid, vocab::localName(row[0]->value())});
      }
    }
  }
  return out;
}

struct PropertyResult {
  int cases = 0;
  std::size_t totalPairs = 0;
  std::string failure;  // empty when every case agreed
};

/// Random KGs (up to 10 models x 10 devices): both traversals and both
/// compiled queries must equal the brute force.
inline PropertyResult runProperty(unsigned seed, int cases) {
  std::mt19937 rng(seed);
  PropertyResult r;
  for (int i = 0; i < cases; ++i) {
    Kg kg = randomKg(rng);
    const Pairs expected = bruteForce(kg);
    r.totalPairs += expected.size();
    const std::pair<const char*, Pairs> checks[] = {{"traversal by device", traversal(kg, true)},
                                                    {"traversal by model", traversal(kg, false)},
                                                    {"query by device", compiled(kg, true)},
                                                    {"query by model", compiled(kg, false)}};
    for (const auto& [what, got] : checks) {
      if (got != expected) {
        std::ostringstream msg;
        msg << "case " << i << ": " << what << " found " << got.size() << " pairs, brute force " << expected.size();
        r.failure = msg.str();
        return r;
      }
    }
    ++r.cases;
  }
  return r;
}

}  // namespace seloc::testutil::matchmaker
