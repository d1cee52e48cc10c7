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

#ifndef SELOC_SELOC_H
#define SELOC_SELOC_H

/*
 * C interface of the seloc knowledge-graph registry.
 *
 * Every function returns a seloc_status; on failure seloc_last_error()
 * describes the problem (thread-local, valid until the next call on the
 * same thread). Objects are opaque and owned by the caller once returned.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define SELOC_API __attribute__((visibility("default")))
#else
#define SELOC_API
#endif

typedef enum seloc_status {
  SELOC_OK = 0,
  SELOC_INVALID_ARGUMENT = 1, /* null pointer, bad enum value */
  SELOC_IO = 2,               /* unreadable or unwritable data directory */
  SELOC_CORRUPT_STORE = 3,
  SELOC_BIND = 4,             /* server address unavailable */
  SELOC_INTERNAL = 5,
  SELOC_DOMAIN = 6            /* any other library error; see seloc_last_error_code */
} seloc_status;

typedef struct seloc_registry seloc_registry;
typedef struct seloc_response seloc_response;
typedef struct seloc_server seloc_server;

SELOC_API const char* seloc_version(void);

/* Message of the last failure on this thread ("" when none). */
SELOC_API const char* seloc_last_error(void);
/* Machine-readable error code of the last failure (e.g. "ManifestSchemaError"). */
SELOC_API const char* seloc_last_error_code(void);

/*
 * Opens a registry. data_dir may be NULL for an in-memory store;
 * recipes_dir may be NULL for the built-in recipes only.
 */
SELOC_API seloc_status seloc_registry_open(const char* data_dir, int load_fixtures, const char* recipes_dir,
                                           seloc_registry** out);
/* Flushes the dataset and releases the registry. NULL is ignored. */
SELOC_API void seloc_registry_close(seloc_registry* registry);

/*
 * Dispatches one request through the route table. target is the
 * percent-encoded path plus query string; content_type, accept and body may
 * be NULL. Route-level failures (404, 400, ...) still return SELOC_OK with the
 * error envelope in the response.
 */
SELOC_API seloc_status seloc_registry_call(seloc_registry* registry, const char* method, const char* target,
                                           const char* content_type, const char* accept, const char* body,
                                           size_t body_len, seloc_response** out);

SELOC_API int seloc_response_status(const seloc_response* response);
/* Not NUL-terminated for binary bodies; use len. */
SELOC_API const char* seloc_response_body(const seloc_response* response, size_t* len);
SELOC_API const char* seloc_response_content_type(const seloc_response* response);
SELOC_API void seloc_response_free(seloc_response* response);

/*
 * Starts the HTTP server on a background thread. port 0 picks a free port;
 * cors_origins is a comma-separated list ("*" for any, NULL for none);
 * heartbeat_ms <= 0 selects the default of 15000.
 */
SELOC_API seloc_status seloc_server_start(seloc_registry* registry, const char* host, int port,
                                          const char* cors_origins, int heartbeat_ms, seloc_server** out);
SELOC_API int seloc_server_port(const seloc_server* server);
/* Blocks until seloc_server_stop is called from another thread. */
SELOC_API void seloc_server_wait(seloc_server* server);
/* Stops, flushes and frees the server. NULL is ignored. */
SELOC_API void seloc_server_stop(seloc_server* server);

typedef enum seloc_manifest_kind { SELOC_MANIFEST_MODEL = 0, SELOC_MANIFEST_DEVICE = 1 } seloc_manifest_kind;

/*
 * Compiles a JSON manifest to Turtle. graph_name may be NULL. The result is
 * NUL-terminated and must be released with seloc_string_free.
 */
SELOC_API seloc_status seloc_compile_manifest(seloc_manifest_kind kind, const char* json, size_t len,
                                              const char* graph_name, char** turtle);
SELOC_API void seloc_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* SELOC_SELOC_H */
