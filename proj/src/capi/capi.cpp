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

#include "seloc/seloc.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>

#include "catalog/catalog.hpp"
#include "catalog/vocabulary.hpp"
#include "common/error.hpp"
#include "rdf/turtle.hpp"
#include "server/server.hpp"
#include "service/registry.hpp"

struct seloc_registry {
  std::unique_ptr<seloc::service::Registry> impl;
};

struct seloc_response {
  seloc::service::Response impl;
};

struct seloc_server {
  std::unique_ptr<seloc::server::Server> impl;
};

namespace {

thread_local std::string lastError;
thread_local std::string lastCode;

void clearError() {
  lastError.clear();
  lastCode.clear();
}

seloc_status fail(seloc_status status, std::string code, std::string message) {
  lastCode = std::move(code);
  lastError = std::move(message);
  return status;
}

seloc_status statusFor(const std::string& code) {
  if (code == "IoError") return SELOC_IO;
  if (code == "CorruptStoreError") return SELOC_CORRUPT_STORE;
  if (code == "BindError") return SELOC_BIND;
  return SELOC_DOMAIN;
}

// Runs `body`, translating exceptions into a status plus last-error text.
template <typename F>
seloc_status guarded(F&& body) {
  clearError();
  try {
    body();
    return SELOC_OK;
  } catch (const seloc::Error& e) {
    return fail(statusFor(e.code()), e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SELOC_INTERNAL, "InternalError", "out of memory");
  } catch (const std::exception& e) {
    return fail(SELOC_INTERNAL, "InternalError", e.what());
  } catch (...) {
    return fail(SELOC_INTERNAL, "InternalError", "unknown failure");
  }
}

seloc_status nullArgument(const char* name) {
  return fail(SELOC_INVALID_ARGUMENT, "InvalidArgument", std::string(name) + " must not be NULL");
}

}  // namespace

extern "C" {

const char* seloc_version(void) { return "0.1.0"; }

const char* seloc_last_error(void) { return lastError.c_str(); }

const char* seloc_last_error_code(void) { return lastCode.c_str(); }

seloc_status seloc_registry_open(const char* data_dir, int load_fixtures, const char* recipes_dir,
                                 seloc_registry** out) {
  if (!out) return nullArgument("out");
  *out = nullptr;
  return guarded([&] {
    seloc::service::RegistryConfig config;
    if (data_dir) config.dataDirectory = data_dir;
    if (recipes_dir) config.recipesDirectory = recipes_dir;
    config.loadFixtures = load_fixtures != 0;
    auto handle = std::make_unique<seloc_registry>();
    handle->impl = std::make_unique<seloc::service::Registry>(std::move(config));
    *out = handle.release();
  });
}

void seloc_registry_close(seloc_registry* registry) {
  if (!registry) return;
  guarded([&] { registry->impl->flush(); });
  delete registry;
}

seloc_status seloc_registry_call(seloc_registry* registry, const char* method, const char* target,
                                 const char* content_type, const char* accept, const char* body,
                                 size_t body_len, seloc_response** out) {
  if (!out) return nullArgument("out");
  *out = nullptr;
  if (!registry) return nullArgument("registry");
  if (!method) return nullArgument("method");
  if (!target) return nullArgument("target");
  if (!body && body_len > 0) return nullArgument("body");
  return guarded([&] {
    seloc::service::Request req;
    req.method = method;
    req.target = target;
    if (content_type) req.contentType = content_type;
    if (accept) req.accept = accept;
    if (body) req.body.assign(body, body_len);
    auto resp = std::make_unique<seloc_response>();
    resp->impl = registry->impl->handle(req);
    *out = resp.release();
  });
}

int seloc_response_status(const seloc_response* response) { return response ? response->impl.status : 0; }

const char* seloc_response_body(const seloc_response* response, size_t* len) {
  if (!response) {
    if (len) *len = 0;
    return "";
  }
  if (len) *len = response->impl.body.size();
  return response->impl.body.c_str();
}

const char* seloc_response_content_type(const seloc_response* response) {
  return response ? response->impl.contentType.c_str() : "";
}

void seloc_response_free(seloc_response* response) { delete response; }

seloc_status seloc_server_start(seloc_registry* registry, const char* host, int port, const char* cors_origins,
                                int heartbeat_ms, seloc_server** out) {
  if (!out) return nullArgument("out");
  *out = nullptr;
  if (!registry) return nullArgument("registry");
  if (port < 0 || port > 65535) return fail(SELOC_INVALID_ARGUMENT, "InvalidArgument", "port out of range");
  return guarded([&] {
    seloc::server::ServerConfig config;
    if (host) config.host = host;
    config.port = port;
    if (heartbeat_ms > 0) config.heartbeat = std::chrono::milliseconds(heartbeat_ms);
    if (cors_origins) {
      std::stringstream list(cors_origins);
      std::string origin;
      while (std::getline(list, origin, ',')) {
        if (!origin.empty()) config.corsOrigins.push_back(origin);
      }
    }
    auto handle = std::make_unique<seloc_server>();
    handle->impl = std::make_unique<seloc::server::Server>(*registry->impl, std::move(config));
    handle->impl->start();
    *out = handle.release();
  });
}

int seloc_server_port(const seloc_server* server) { return server ? server->impl->port() : -1; }

void seloc_server_wait(seloc_server* server) {
  if (server) server->impl->wait();
}

void seloc_server_stop(seloc_server* server) {
  if (!server) return;
  guarded([&] { server->impl->stop(); });
  delete server;
}

seloc_status seloc_compile_manifest(seloc_manifest_kind kind, const char* json, size_t len,
                                    const char* graph_name, char** turtle) {
  if (!turtle) return nullArgument("turtle");
  *turtle = nullptr;
  if (!json) return nullArgument("json");
  if (kind != SELOC_MANIFEST_MODEL && kind != SELOC_MANIFEST_DEVICE) {
    return fail(SELOC_INVALID_ARGUMENT, "InvalidArgument", "unknown manifest kind");
  }
  return guarded([&] {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(std::string_view(json, len));
    } catch (const nlohmann::json::exception& e) {
      throw seloc::Error("ManifestSchemaError", std::string("manifest is not valid JSON: ") + e.what());
    }
    const std::string name = graph_name && *graph_name ? seloc::catalog::graphIri(graph_name) : "";
    auto graph = kind == SELOC_MANIFEST_MODEL
                     ? seloc::catalog::compileModelManifest(seloc::catalog::parseModelManifest(doc), name)
                     : seloc::catalog::compileDeviceManifest(seloc::catalog::parseDeviceManifest(doc), name);
    auto text = seloc::rdf::serializeTurtle(graph, seloc::vocab::defaultPrefixes());
    char* copy = static_cast<char*>(std::malloc(text.size() + 1));
    if (!copy) throw std::bad_alloc();
    std::memcpy(copy, text.c_str(), text.size() + 1);
    *turtle = copy;
  });
}

void seloc_string_free(char* text) { std::free(text); }

}  // extern "C"
