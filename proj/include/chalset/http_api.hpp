// Copyright 2026 The Chalset Authors.
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

#ifndef CHALSET_HTTP_API_HPP_
#define CHALSET_HTTP_API_HPP_

#include <string>

#include "chalset/error.hpp"
#include "chalset/service.hpp"

namespace httplib {
class Server;
}

namespace chalset {

struct HttpOptions {
  // Bearer token required by POST /projects. Empty disables project creation
  // over HTTP.
  std::string creator_token;
};

// Routes:
//   POST /projects                    (creator token)
//   GET  /projects/{id}/session       (annotator token)
//   GET  /projects/{id}/next          (annotator token)
//   POST /projects/{id}/judgments     (annotator token)
//   GET  /projects/{id}/progress      (annotator or admin token)
//   GET  /projects/{id}/export        (admin token)
// Errors are returned as {"code", "message", "detail"}.
void install_routes(httplib::Server& server, Service& service, HttpOptions options = {});

int http_status(ErrorCode code);

}  // namespace chalset

#endif  // CHALSET_HTTP_API_HPP_
