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

#include <sstream>

#include "codegen/codegen.hpp"

namespace seloc::codegen {

namespace {

const char* const kIdentifier = "[A-Za-z_][A-Za-z0-9_]*";
const char* const kLabel = "[A-Za-z0-9_-]+";
const char* const kLabelList = "[A-Za-z0-9_-]+(,[A-Za-z0-9_-]+)*";

ConfigField field(std::string name, std::string file, std::string description, ValueType type) {
  ConfigField f;
  f.name = std::move(name);
  f.file = std::move(file);
  f.description = std::move(description);
  f.valueType = type;
  return f;
}

ConfigField withPattern(ConfigField f, const char* pattern) {
  f.pattern = pattern;
  return f;
}

ConfigField withRange(ConfigField f, std::optional<double> lo, std::optional<double> hi) {
  f.minimum = lo;
  f.maximum = hi;
  return f;
}

ConfigField withEnum(ConfigField f, std::vector<std::string> values) {
  f.enumValues = std::move(values);
  return f;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) out.push_back(part);
  return out;
}

// --- npu ---------------------------------------------------------------------

const char* const kNpuConf = R"(# TM NPU application configuration
# Generated {{generated_at}} for device {{device_id}} ({{device_name}}).

[model]
uuid = {{model_uuid}}
name = {{model_name}}
slot = {{model_slot}}
macs = {{model_macs}}
min_ram_kb = {{model_min_ram_kb}}
min_flash_kb = {{model_min_flash_kb}}

[input]
source = {{input_source}}
sensor = {{model_sensor_classes}}
shape = {{model_input_shape}}

[execution]
mode = {{execution_mode}}
confidence_threshold = {{confidence_threshold}}

[output]
plc_address = {{classification_address}}
)";

const char* const kNpuMain = R"(# Inference loop for {{model_name}} ({{model_uuid}}).
# Generated {{generated_at}} for device {{device_id}}.
import time

CLASS_LABELS = [{{class_labels_py}}]
REJECT_LABEL = "{{reject_label}}"
CONFIDENCE_THRESHOLD = {{confidence_threshold}}
PREPROCESS_SIZE = ({{preprocess_width}}, {{preprocess_height}})
INPUT_SHAPE = {{model_input_shape_py}}
OUTPUT_VARIABLE = "{{output_variable_name}}"
POLLING_INTERVAL_MS = {{polling_interval_ms}}


def preprocess(frame):
    return frame.resize(PREPROCESS_SIZE)


def classify(scores):
    best = max(range(len(scores)), key=lambda i: scores[i])
    if scores[best] < CONFIDENCE_THRESHOLD:
        return REJECT_LABEL, scores[best]
    return CLASS_LABELS[best], scores[best]


def run(npu, plc):
    while True:
        frame = npu.read_input()
        label, confidence = classify(npu.infer(preprocess(frame)))
        plc.write(OUTPUT_VARIABLE, {"classLabel": label, "confidence": confidence})
        time.sleep(POLLING_INTERVAL_MS / 1000.0)
)";

const char* const kNpuUdt = R"(TYPE "{{struct_name}}"
VERSION : 0.1
   STRUCT
      classLabel : Int;   // index into the {{class_count}} class labels
      confidence : Real;
      reject : Bool;
   END_STRUCT;

END_TYPE
)";

const char* const kNpuScl = R"(FUNCTION_BLOCK "{{function_block_name}}"
{ S7_Optimized_Access := 'TRUE' }
VERSION : 0.1
   VAR_INPUT
      enable : Bool;
      result : "{{struct_name}}";
   END_VAR

   VAR_OUTPUT
      lastLabel : Int;
      lastConfidence : Real;
   END_VAR

BEGIN
   // Consumes results of model {{model_uuid}} computed by the TM NPU of {{device_id}}.
   IF #enable AND NOT #result.reject THEN
      #lastLabel := #result.classLabel;
      #lastConfidence := #result.confidence;
      "{{data_block_name}}".latest := #result;
      "{{data_block_name}}".counter[#result.classLabel] := "{{data_block_name}}".counter[#result.classLabel] + 1;
   END_IF;
END_FUNCTION_BLOCK
)";

const char* const kNpuDb = R"(DATA_BLOCK "{{data_block_name}}"
{ S7_Optimized_Access := 'TRUE' }
VERSION : 0.1
NON_RETAIN
   STRUCT
      latest : "{{struct_name}}";
      counter : Array[0..{{class_max_index}}] of DInt;
{{class_comment_lines}}
   END_STRUCT;

BEGIN

END_DATA_BLOCK
)";

class NpuTarget : public Target {
 public:
  NpuTarget() {
    descriptor_ = {"npu",
                   "TM NPU + PLC project",
                   {"npu"},
                   {"npu_app.conf", "main.py", "DataTypes.udt", "fbLogic.scl", "ControlData.db"}};
    fields_ = {
        withRange(field("model_slot", "npu_app.conf", "NPU model slot the network is loaded into",
                        ValueType::Integer),
                  0, 15),
        withEnum(field("input_source", "npu_app.conf", "Where the NPU reads frames from", ValueType::Enum),
                 {"camera", "plc", "file"}),
        withEnum(field("execution_mode", "npu_app.conf", "Inference scheduling", ValueType::Enum),
                 {"continuous", "triggered"}),
        withRange(field("confidence_threshold", "npu_app.conf",
                        "Scores below this are reported as the reject label", ValueType::Decimal),
                  0, 1),
        withPattern(field("class_labels", "main.py", "Comma-separated labels in model output order",
                          ValueType::String),
                    kLabelList),
        withPattern(field("reject_label", "main.py", "Label reported below the confidence threshold",
                          ValueType::String),
                    kLabel),
        withRange(field("preprocess_width", "main.py", "Input width after resizing", ValueType::Integer), 1,
                  std::nullopt),
        withRange(field("preprocess_height", "main.py", "Input height after resizing", ValueType::Integer), 1,
                  std::nullopt),
        withPattern(field("output_variable_name", "main.py", "PLC variable receiving results",
                          ValueType::String),
                    kIdentifier),
        withRange(field("polling_interval_ms", "main.py", "Delay between inferences", ValueType::Integer), 1,
                  std::nullopt),
        withPattern(field("struct_name", "DataTypes.udt", "PLC data type for one result", ValueType::String),
                    kIdentifier),
        withPattern(field("function_block_name", "fbLogic.scl", "Function block consuming results",
                          ValueType::String),
                    kIdentifier),
        withPattern(field("data_block_name", "ControlData.db", "Data block holding results and counters",
                          ValueType::String),
                    kIdentifier),
    };
  }

  const TargetDescriptor& descriptor() const override { return descriptor_; }
  const std::vector<ConfigField>& fields() const override { return fields_; }

  std::vector<std::tuple<std::string, int, int>> effortBaselines() const override {
    return {{"npu_app.conf", 20, 10},
            {"main.py", 284, 19},
            {"DataTypes.udt", 40, 3},
            {"fbLogic.scl", 408, 3},
            {"ControlData.db", 14, 3}};
  }

  std::map<std::string, std::string> render(const Context& context, const nlohmann::json&) const override {
    Context ctx = context;
    auto labels = split(ctx.at("class_labels"), ',');
    std::string py, comments;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      py += (i ? ", " : "") + ("\"" + labels[i] + "\"");
      comments += (i ? "\n" : "") + ("      // counter[" + std::to_string(i) + "] = " + labels[i]);
    }
    ctx["class_labels_py"] = py;
    ctx["class_count"] = std::to_string(labels.size());
    ctx["class_max_index"] = std::to_string(labels.size() - 1);
    ctx["class_comment_lines"] = comments;
    return {{"npu_app.conf", renderTemplate(kNpuConf, ctx)},
            {"main.py", renderTemplate(kNpuMain, ctx)},
            {"DataTypes.udt", renderTemplate(kNpuUdt, ctx)},
            {"fbLogic.scl", renderTemplate(kNpuScl, ctx)},
            {"ControlData.db", renderTemplate(kNpuDb, ctx)}};
  }

 private:
  TargetDescriptor descriptor_;
  std::vector<ConfigField> fields_;
};

// --- generic-c ---------------------------------------------------------------

const char* const kConfigHeader = R"(/* Model configuration for {{app_name}}.
 * Generated {{generated_at}} for device {{device_id}} ({{device_name}}). */
#ifndef {{app_name_upper}}_MODEL_CONFIG_H
#define {{app_name_upper}}_MODEL_CONFIG_H

#define MODEL_UUID "{{model_uuid}}"
#define MODEL_MACS {{model_macs}}LL
#define MODEL_MIN_RAM_KB {{model_min_ram_kb}}
#define MODEL_MIN_FLASH_KB {{model_min_flash_kb}}
#define MODEL_INPUT_SENSORS "{{model_sensor_classes}}"

#define DEVICE_ID "{{device_id}}"
#define DEVICE_RAM_KB {{device_ram_kb}}
#define DEVICE_FLASH_KB {{device_flash_kb}}

#define SAMPLE_RATE_HZ {{sample_rate_hz}}
#define OUTPUT_PIN {{output_pin}}
#define INFERENCE_INTERVAL_MS {{inference_interval_ms}}
#define LOG_LEVEL "{{log_level}}"

#endif
)";

const char* const kMainC = R"(/* Entry point for {{app_name}} running {{model_uuid}} on {{device_id}}. */
#include "model_config.h"

extern int sensor_read(float* buffer, int capacity, int sample_rate_hz);
extern int model_invoke(const float* input, int length, float* scores, int classes);
extern void pin_write(int pin, int value);
extern void sleep_ms(int ms);

int main(void) {
  static float input[1024];
  float scores[2];
  for (;;) {
    int n = sensor_read(input, 1024, SAMPLE_RATE_HZ);
    if (n > 0 && model_invoke(input, n, scores, 2) == 0) {
      pin_write(OUTPUT_PIN, scores[1] > scores[0]);
    }
    sleep_ms(INFERENCE_INTERVAL_MS);
  }
  return 0;
}
)";

class GenericCTarget : public Target {
 public:
  GenericCTarget() {
    descriptor_ = {"generic-c", "Generic C firmware skeleton", {"generic-c"}, {"model_config.h", "main.c"}};
    ConfigField logLevel = withEnum(
        field("log_level", "model_config.h", "Firmware log verbosity", ValueType::Enum),
        {"error", "warn", "info", "debug"});
    logLevel.required = false;
    logLevel.defaultValue = "info";
    fields_ = {
        withPattern(field("app_name", "model_config.h", "C identifier naming the application",
                          ValueType::String),
                    kIdentifier),
        withRange(field("sample_rate_hz", "model_config.h", "Sensor sampling rate", ValueType::Integer), 1,
                  std::nullopt),
        withRange(field("output_pin", "model_config.h", "GPIO driven by the prediction", ValueType::Integer), 0,
                  255),
        withRange(field("inference_interval_ms", "main.c", "Delay between inferences", ValueType::Integer), 1,
                  std::nullopt),
        logLevel,
    };
  }

  const TargetDescriptor& descriptor() const override { return descriptor_; }
  const std::vector<ConfigField>& fields() const override { return fields_; }

  std::map<std::string, std::string> render(const Context& context, const nlohmann::json&) const override {
    Context ctx = context;
    std::string upper = ctx.at("app_name");
    for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    ctx["app_name_upper"] = upper;
    return {{"model_config.h", renderTemplate(kConfigHeader, ctx)}, {"main.c", renderTemplate(kMainC, ctx)}};
  }

 private:
  TargetDescriptor descriptor_;
  std::vector<ConfigField> fields_;
};

}  // namespace

std::unique_ptr<Target> makeNpuTarget() { return std::make_unique<NpuTarget>(); }
std::unique_ptr<Target> makeGenericCTarget() { return std::make_unique<GenericCTarget>(); }

}  // namespace seloc::codegen
