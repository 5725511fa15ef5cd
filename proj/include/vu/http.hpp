#pragma once

#include <string>

#include "vu/error.hpp"
#include "vu/service.hpp"

namespace httplib {
class Server;
}

namespace vu::http {

/// HTTP status for an error code (see docs/api.md).
int status_for(ErrorCode code);

/// Installs every route on `server`. The service must outlive the server.
void bind_routes(httplib::Server& server, service::Service& svc);

/// Blocks serving on host:port until the process is stopped.
bool serve(service::Service& svc, const std::string& host, int port);

}  // namespace vu::http
