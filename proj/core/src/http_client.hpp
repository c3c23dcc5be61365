#pragma once

#include <chrono>
#include <string>

namespace fincast::detail {

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// Blocking GET. Accepts http:// and https:// URLs (https requires the
/// library to be built with TLS support). Throws NetworkError on transport
/// failure; status codes are returned, not thrown.
HttpResponse http_get(const std::string& url, std::chrono::seconds timeout);

struct HttpPostRequest {
    std::string url;
    std::string body;
    std::string content_type = "application/json";
    std::string bearer_token;  // empty = no Authorization header
    std::chrono::seconds timeout{30};
};

HttpResponse http_post(const HttpPostRequest& req);

}  // namespace fincast::detail
