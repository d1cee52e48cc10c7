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

// seloc: command-line front door. Talks to the library through the C API,
// or to a running server with --remote.
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "cli_support.hpp"
#include "httplib.h"
#include "json.hpp"
#include "seloc/seloc.h"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Reply {
  int status = 0;
  std::string contentType;
  std::string body;
};

// Failure outside the route table (unreachable server, unreadable file, ...).
struct Failure {
  std::string code;
  std::string message;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual Reply call(const std::string& method, const std::string& target, const std::string& contentType,
                     const std::string& accept, const std::string& body) = 0;
};

class LocalBackend : public Backend {
 public:
  LocalBackend(const std::string& dataDir, bool fixtures, const std::string& recipesDir) {
    if (seloc_registry_open(dataDir.empty() ? nullptr : dataDir.c_str(), fixtures ? 1 : 0,
                            recipesDir.empty() ? nullptr : recipesDir.c_str(), &registry_) != SELOC_OK) {
      throw Failure{seloc_last_error_code(), seloc_last_error()};
    }
  }
  ~LocalBackend() override { seloc_registry_close(registry_); }

  seloc_registry* registry() { return registry_; }

  Reply call(const std::string& method, const std::string& target, const std::string& contentType,
             const std::string& accept, const std::string& body) override {
    seloc_response* resp = nullptr;
    if (seloc_registry_call(registry_, method.c_str(), target.c_str(), contentType.c_str(), accept.c_str(),
                            body.data(), body.size(), &resp) != SELOC_OK) {
      throw Failure{seloc_last_error_code(), seloc_last_error()};
    }
    Reply r;
    std::size_t len = 0;
    const char* data = seloc_response_body(resp, &len);
    r.status = seloc_response_status(resp);
    r.contentType = seloc_response_content_type(resp);
    r.body.assign(data, len);
    seloc_response_free(resp);
    return r;
  }

 private:
  seloc_registry* registry_ = nullptr;
};

class RemoteBackend : public Backend {
 public:
  explicit RemoteBackend(const std::string& url) : client_(url) {
    client_.set_connection_timeout(5);
    client_.set_read_timeout(60);
  }

  Reply call(const std::string& method, const std::string& target, const std::string& contentType,
             const std::string& accept, const std::string& body) override {
    httplib::Headers headers;
    if (!accept.empty()) headers.emplace("Accept", accept);
    httplib::Result res;
    if (method == "GET") {
      res = client_.Get(target, headers);
    } else if (method == "POST") {
      res = client_.Post(target, headers, body, contentType);
    } else if (method == "PUT") {
      res = client_.Put(target, headers, body, contentType);
    } else {
      throw Failure{"UsageError", "unsupported method " + method};
    }
    if (!res) throw Failure{"ConnectionError", "request failed: " + httplib::to_string(res.error())};
    return {res->status, res->get_header_value("Content-Type"), res->body};
  }

 private:
  httplib::Client client_;
};

std::string encode(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

std::string readFile(const std::string& path) {
  if (path == "-") {
    std::stringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{"IoError", "cannot read " + path};
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void writeFile(const fs::path& path, const std::string& data) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  out << data;
  if (!out) throw Failure{"IoError", "cannot write " + path.string()};
}

std::string localName(const std::string& iri) {
  auto pos = iri.find_last_of("#/");
  return pos == std::string::npos ? iri : iri.substr(pos + 1);
}

std::string number(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

std::string joinLocal(const json& arr) {
  std::string out;
  for (const auto& v : arr) out += (out.empty() ? "" : ",") + localName(v.get<std::string>());
  return out;
}

std::string cellOf(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return number(v.get<double>());
  if (v.is_null()) return "";
  return v.dump();
}

// --- table renderers -----------------------------------------------------------

std::string renderModels(const json& list) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& m : list) {
    json classes = json::array();
    for (const auto& in : m["inputs"]) classes.push_back(in["sensorClass"]);
    rows.push_back({m["uuid"], m["name"], joinLocal(classes), cellOf(m["minRamKb"]), cellOf(m["minFlashKb"])});
  }
  return seloc::cli::formatTable(rows, {"UUID", "NAME", "SENSORS", "RAM_KB", "FLASH_KB"});
}

std::string renderDevices(const json& list) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& d : list) {
    rows.push_back({d["id"], d["name"], joinLocal(d["sensorClasses"]), cellOf(d["ramKb"]), cellOf(d["flashKb"]),
                    d["runtimePlatform"]});
  }
  return seloc::cli::formatTable(rows, {"ID", "NAME", "SENSORS", "RAM_KB", "FLASH_KB", "PLATFORM"});
}

std::string renderMatches(const json& list, bool byDevice) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : list) {
    rows.push_back({cellOf(r["rank"]), byDevice ? r["modelUuid"] : r["deviceId"], cellOf(r["ramMarginKb"]),
                    cellOf(r["flashMarginKb"]), joinLocal(r["satisfiedSensors"])});
  }
  return seloc::cli::formatTable(rows, {"RANK", byDevice ? "MODEL" : "DEVICE", "RAM_MARGIN_KB", "FLASH_MARGIN_KB",
                                        "SENSORS"});
}

std::string renderHits(const json& list) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& h : list) {
    char score[32];
    std::snprintf(score, sizeof score, "%.4f", h["score"].get<double>());
    std::string terms;
    for (const auto& t : h["matchedTerms"]) terms += (terms.empty() ? "" : ",") + t.get<std::string>();
    rows.push_back({score, h["kind"], h["key"], h["name"], terms});
  }
  return seloc::cli::formatTable(rows, {"SCORE", "KIND", "KEY", "NAME", "TERMS"});
}

std::string renderResults(const json& results) {
  std::vector<std::string> vars;
  for (const auto& v : results["head"]["vars"]) vars.push_back(v);
  std::vector<std::vector<std::string>> rows;
  for (const auto& b : results["results"]["bindings"]) {
    std::vector<std::string> row;
    for (const auto& v : vars) row.push_back(b.contains(v) ? b[v]["value"].get<std::string>() : "");
    rows.push_back(std::move(row));
  }
  return seloc::cli::formatTable(rows, vars);
}

std::string renderEffort(const json& report) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : report["perFile"]) {
    rows.push_back({r["file"], cellOf(r["traditional"]), cellOf(r["template"]), cellOf(r["semantic"])});
  }
  rows.push_back({"total", cellOf(report["baselineTraditional"]), cellOf(report["baselineTemplate"]),
                  cellOf(report["userInputCount"])});
  char ratios[128];
  std::snprintf(ratios, sizeof ratios, "reduction: %.2fx vs traditional, %.2fx vs template\n",
                report["reductionVsTraditional"].get<double>(), report["reductionVsTemplate"].get<double>());
  return seloc::cli::formatTable(rows, {"FILE", "TRADITIONAL", "TEMPLATE", "SEMANTIC"}) + ratios;
}

std::string renderProposal(const json& p) {
  std::ostringstream out;
  const std::string kind = p.value("kind", "");
  if (kind == "binding") {
    out << "binding " << p["bindingId"].get<std::string>() << " (" << p["status"].get<std::string>() << ") for recipe "
        << p["recipeId"].get<std::string>() << "\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& [role, cands] : p["assignments"].items()) {
      for (const auto& c : cands) rows.push_back({role, c["deviceId"], c["datapointRole"], c["address"]});
    }
    out << seloc::cli::formatTable(rows, {"ROLE", "DEVICE", "DATAPOINT", "ADDRESS"});
  } else if (kind == "ambiguity") {
    out << "ambiguous: pick one candidate per role\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& [role, cands] : p["candidates"].items()) {
      for (const auto& c : cands) rows.push_back({role, c["deviceId"], c["datapointRole"], c["address"]});
    }
    out << seloc::cli::formatTable(rows, {"ROLE", "DEVICE", "DATAPOINT", "ADDRESS"});
  } else {
    out << "missing inputs for recipe " << p.value("recipeId", "") << "\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& m : p["missing"]) rows.push_back({m["role"], localName(m["semanticType"])});
    out << seloc::cli::formatTable(rows, {"ROLE", "SEMANTIC_TYPE"});
  }
  return out.str();
}

std::string renderRecipes(const json& list) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : list) {
    std::string inputs;
    for (const auto& in : r["inputs"]) {
      inputs += (inputs.empty() ? "" : ",") + in["role"].get<std::string>() + ":" +
                localName(in["semanticType"].get<std::string>());
    }
    rows.push_back({r["recipeId"], r["name"], inputs});
  }
  return seloc::cli::formatTable(rows, {"ID", "NAME", "INPUTS"});
}

std::string renderFields(const json& list) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& f : list) {
    rows.push_back({f["name"], f["file"], f["valueType"], f.value("required", true) ? "yes" : "no",
                    f["description"]});
  }
  return seloc::cli::formatTable(rows, {"NAME", "FILE", "TYPE", "REQUIRED", "DESCRIPTION"});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seloc: semantic registry for TinyML models and devices"};
  app.require_subcommand(1);
  app.fallthrough();

  bool jsonOut = false;
  bool fixtures = false;
  std::string remote;
  std::string dataDir;
  std::string recipesDir;
  if (const char* env = std::getenv("SELOC_DATA_DIR")) dataDir = env;
  app.add_flag("--json", jsonOut, "Print the exact API payloads");
  app.add_option("--remote", remote, "Talk to a running server, e.g. http://127.0.0.1:8080");
  app.add_flag("--fixtures", fixtures, "Seed the store with the bundled fixtures");
  app.add_option("--data-dir", dataDir, "Store location (default $SELOC_DATA_DIR or ./seloc-data)");
  app.add_option("--recipes-dir", recipesDir, "Directory of recipe JSON files");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Replace a named graph with a Turtle file");
  std::string ingestFile, graphName;
  ingest->add_option("file", ingestFile, "Turtle file ('-' for stdin)")->required();
  ingest->add_option("--graph", graphName, "Graph name")->required();

  // list
  auto* list = app.add_subcommand("list", "List models or devices");
  std::string listWhat;
  list->add_option("what", listWhat, "models | devices")->required()->check(CLI::IsMember({"models", "devices"}));

  // match
  auto* match = app.add_subcommand("match", "Find compatible models or devices");
  std::string matchDevice, matchModel;
  auto* optDevice = match->add_option("--device", matchDevice, "Device id: list models it can host");
  auto* optModel = match->add_option("--model", matchModel, "Model uuid: list devices that can host it");
  optDevice->excludes(optModel);
  optModel->excludes(optDevice);

  // search
  auto* search = app.add_subcommand("search", "Ranked keyword search");
  std::vector<std::string> searchWords;
  std::string searchKind, searchSensor;
  double maxRam = 0;
  int k = 20;
  search->add_option("text", searchWords, "Query text")->required();
  search->add_option("--kind", searchKind, "model | device")->check(CLI::IsMember({"model", "device"}));
  auto* optMaxRam = search->add_option("--max-ram", maxRam, "Upper bound on RAM (kB)");
  search->add_option("--sensor", searchSensor, "Required sensor class");
  search->add_option("-k", k, "Number of hits")->check(CLI::PositiveNumber);

  // query
  auto* query = app.add_subcommand("query", "Run a SPARQL SELECT query");
  std::string queryFile;
  query->add_option("file", queryFile, "Query file ('-' for stdin)")->required();

  // targets / config
  auto* targets = app.add_subcommand("targets", "List code generation targets");
  auto* configCmd = app.add_subcommand("config", "Show the configuration fields a project needs");
  std::string genModel, genDevice, genTarget, genConfig, genOut, genZip;
  for (auto* sub : {configCmd}) {
    sub->add_option("--model", genModel, "Model uuid")->required();
    sub->add_option("--device", genDevice, "Device id")->required();
    sub->add_option("--target", genTarget, "Target id")->required();
  }

  // generate
  auto* generate = app.add_subcommand("generate", "Generate a deployment project");
  generate->add_option("--model", genModel, "Model uuid")->required();
  generate->add_option("--device", genDevice, "Device id")->required();
  generate->add_option("--target", genTarget, "Target id")->required();
  generate->add_option("--config", genConfig, "Configuration JSON file");
  auto* optOut = generate->add_option("--out", genOut, "Directory to write the files to");
  auto* optZip = generate->add_option("--zip", genZip, "Write a zip archive instead");
  optOut->excludes(optZip);
  std::string generatedAt;
  generate->add_option("--generated-at", generatedAt, "Timestamp recorded in the bundle");

  // recipe
  auto* recipe = app.add_subcommand("recipe", "Dashboard recipes and bindings");
  recipe->require_subcommand(1);
  auto* recipes = recipe->add_subcommand("recipes", "List recipes");
  auto* bind = recipe->add_subcommand("bind", "Propose a binding of a recipe to devices");
  std::string recipeId, bindingId, decision = "accept";
  std::vector<std::string> bindDevices;
  bind->add_option("recipe", recipeId, "Recipe id")->required();
  bind->add_option("--device", bindDevices, "Device id (repeatable)")->required();
  auto* ack = recipe->add_subcommand("ack", "Accept or reject a proposed binding");
  ack->add_option("binding", bindingId, "Binding id")->required();
  ack->add_option("--decision", decision, "accept | reject")->check(CLI::IsMember({"accept", "reject"}));
  auto* show = recipe->add_subcommand("show", "Show a binding");
  show->add_option("binding", bindingId, "Binding id")->required();

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP server");
  std::string host = "127.0.0.1", cors;
  int port = 8080, heartbeatMs = 15000;
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve->add_option("--cors", cors, "Comma-separated allowed origins ('*' for any)");
  serve->add_option("--heartbeat-ms", heartbeatMs, "SSE heartbeat interval")->check(CLI::PositiveNumber);

  // compile
  auto* compile = app.add_subcommand("compile", "Compile a JSON manifest to Turtle");
  std::string manifestFile, manifestKind;
  std::string compileGraph;
  compile->add_option("file", manifestFile, "Manifest file ('-' for stdin)")->required();
  compile->add_option("--kind", manifestKind, "model | device")
      ->required()
      ->check(CLI::IsMember({"model", "device"}));
  compile->add_option("--graph", compileGraph, "Graph name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  if (match->parsed() && matchDevice.empty() && matchModel.empty()) {
    std::cerr << "error: match needs --device or --model\n\n" << match->help();
    return 2;
  }
  if (generate->parsed() && genOut.empty() && genZip.empty() && !jsonOut) {
    std::cerr << "error: generate needs --out DIR, --zip FILE or --json\n\n" << generate->help();
    return 2;
  }
  if (serve->parsed() && !remote.empty()) {
    std::cerr << "error: serve cannot be combined with --remote\n";
    return 2;
  }
  if (dataDir.empty()) dataDir = "seloc-data";

  try {
    if (compile->parsed()) {
      auto text = readFile(manifestFile);
      char* turtle = nullptr;
      if (seloc_compile_manifest(manifestKind == "model" ? SELOC_MANIFEST_MODEL : SELOC_MANIFEST_DEVICE, text.data(),
                                 text.size(), compileGraph.empty() ? nullptr : compileGraph.c_str(),
                                 &turtle) != SELOC_OK) {
        throw Failure{seloc_last_error_code(), seloc_last_error()};
      }
      std::cout << turtle;
      seloc_string_free(turtle);
      return 0;
    }

    if (serve->parsed()) {
      // Block the signals before any thread starts so sigwait sees them.
      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);
      LocalBackend local(dataDir, fixtures, recipesDir);
      seloc_server* server = nullptr;
      if (seloc_server_start(local.registry(), host.c_str(), port, cors.empty() ? nullptr : cors.c_str(), heartbeatMs,
                             &server) != SELOC_OK) {
        throw Failure{seloc_last_error_code(), seloc_last_error()};
      }
      std::cout << "listening on http://" << host << ":" << seloc_server_port(server) << std::endl;
      int sig = 0;
      sigwait(&signals, &sig);
      seloc_server_stop(server);
      return 0;
    }

    std::unique_ptr<Backend> backend;
    if (!remote.empty()) {
      backend = std::make_unique<RemoteBackend>(remote);
    } else {
      backend = std::make_unique<LocalBackend>(dataDir, fixtures, recipesDir);
    }

    std::string method = "GET", target, contentType, accept, body;
    std::function<std::string(const json&)> render;

    if (ingest->parsed()) {
      method = "PUT";
      target = "/graphs/" + encode(graphName);
      contentType = "text/turtle";
      body = readFile(ingestFile);
      render = [](const json& r) {
        std::string out = "graph " + r["graph"].get<std::string>() + ": " + cellOf(r["tripleCount"]) + " triples\n";
        for (const auto& v : r["violations"]) {
          out += "warning: " + v["ruleId"].get<std::string>() + " " + v["subjectIri"].get<std::string>() + ": " +
                 v["message"].get<std::string>() + "\n";
        }
        return out;
      };
    } else if (list->parsed()) {
      target = "/" + listWhat;
      render = listWhat == "models" ? renderModels : renderDevices;
    } else if (match->parsed()) {
      const bool byDevice = !matchDevice.empty();
      target = byDevice ? "/match/models?device=" + encode(matchDevice) : "/match/devices?model=" + encode(matchModel);
      render = [byDevice](const json& r) { return renderMatches(r, byDevice); };
    } else if (search->parsed()) {
      method = "POST";
      target = "/search";
      contentType = "application/json";
      json filters = json::object();
      if (!searchKind.empty()) filters["kind"] = searchKind;
      if (optMaxRam->count() > 0) filters["maxRamKb"] = maxRam;
      if (!searchSensor.empty()) filters["requiredSensor"] = searchSensor;
      std::string searchText;
      for (const auto& w : searchWords) searchText += (searchText.empty() ? "" : " ") + w;
      json req = {{"text", searchText}, {"k", k}};
      if (!filters.empty()) req["filters"] = filters;
      body = req.dump();
      render = renderHits;
    } else if (query->parsed()) {
      method = "POST";
      target = "/sparql";
      contentType = "application/sparql-query";
      body = readFile(queryFile);
      render = renderResults;
    } else if (targets->parsed()) {
      target = "/targets";
      render = [](const json& list) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& t : list) {
          std::string files;
          for (const auto& f : t["fileManifest"]) files += (files.empty() ? "" : ",") + f.get<std::string>();
          std::string platforms;
          for (const auto& p : t["compatibleRuntimePlatforms"]) {
            platforms += (platforms.empty() ? "" : ",") + p.get<std::string>();
          }
          rows.push_back({t["targetId"], platforms, files});
        }
        return seloc::cli::formatTable(rows, {"ID", "PLATFORMS", "FILES"});
      };
    } else if (configCmd->parsed()) {
      target = "/projects/config?model=" + encode(genModel) + "&device=" + encode(genDevice) +
               "&target=" + encode(genTarget);
      render = renderFields;
    } else if (generate->parsed()) {
      method = "POST";
      target = "/projects";
      contentType = "application/json";
      json config = json::object();
      if (!genConfig.empty()) {
        try {
          config = json::parse(readFile(genConfig));
        } catch (const json::exception& e) {
          throw Failure{"InvalidConfigError", genConfig + " is not valid JSON: " + e.what()};
        }
      }
      json req = {{"model", genModel}, {"device", genDevice}, {"target", genTarget}, {"config", config}};
      if (!generatedAt.empty()) req["generatedAt"] = generatedAt;
      body = req.dump();
      if (!genZip.empty()) accept = "application/zip";
      render = [&](const json& r) {
        std::string out;
        for (const auto& [path, content] : r["files"].items()) {
          writeFile(fs::path(genOut) / path, content.get<std::string>());
          out += "wrote " + (fs::path(genOut) / path).string() + "\n";
        }
        return out + renderEffort(r["effortReport"]);
      };
    } else if (recipes->parsed()) {
      target = "/recipes";
      render = renderRecipes;
    } else if (bind->parsed()) {
      method = "POST";
      target = "/recipes/" + encode(recipeId) + "/bindings";
      contentType = "application/json";
      body = json({{"deviceIds", bindDevices}}).dump();
      render = renderProposal;
    } else if (ack->parsed()) {
      method = "POST";
      target = "/bindings/" + encode(bindingId) + "/ack";
      contentType = "application/json";
      body = json({{"decision", decision}}).dump();
      render = renderProposal;
    } else if (show->parsed()) {
      target = "/bindings/" + encode(bindingId);
      render = renderProposal;
    }

    Reply reply = backend->call(method, target, contentType, accept, body);
    if (reply.status >= 400) {
      std::string code = "HttpError", message = reply.body;
      try {
        auto err = json::parse(reply.body);
        code = err.value("code", code);
        message = err.value("message", message);
      } catch (const json::exception&) {
      }
      if (jsonOut) std::cout << reply.body << "\n";
      std::cerr << code << ": " << message << "\n";
      return 1;
    }
    if (!genZip.empty() && generate->parsed()) {
      writeFile(genZip, reply.body);
      if (!jsonOut) std::cout << "wrote " << genZip << " (" << reply.body.size() << " bytes)\n";
      return 0;
    }
    if (jsonOut) {
      std::cout << reply.body << "\n";
      if (generate->parsed() && !genOut.empty()) render(json::parse(reply.body));
      return 0;
    }
    std::cout << render(json::parse(reply.body));
    return 0;
  } catch (const Failure& f) {
    std::cerr << f.code << ": " << f.message << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "InternalError: " << e.what() << "\n";
    return 1;
  }
}
