#include "http_client.hpp"

#include <httplib.h>

#include "fincast/errors.hpp"

namespace fincast::detail {

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;    // /path?query, "/" when absent
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw NetworkError("URL must start with http:// or https://: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

httplib::Client make_client(const std::string& origin, std::chrono::seconds timeout) {
    httplib::Client cli(origin);
    cli.set_connection_timeout(timeout.count(), 0);
    cli.set_read_timeout(timeout.count(), 0);
    cli.set_follow_location(true);
    return cli;
}

}  // namespace

HttpResponse http_get(const std::string& url, std::chrono::seconds timeout) {
    const SplitUrl parts = split_url(url);
    auto cli = make_client(parts.origin, timeout);
    auto res = cli.Get(parts.path);
    if (!res)
        throw NetworkError("GET " + url + " failed: " + httplib::to_string(res.error()));
    return HttpResponse{res->status, res->body};
}

HttpResponse http_post(const HttpPostRequest& req) {
    const SplitUrl parts = split_url(req.url);
    auto cli = make_client(parts.origin, req.timeout);
    httplib::Headers headers;
    if (!req.bearer_token.empty())
        headers.emplace("Authorization", "Bearer " + req.bearer_token);
    auto res = cli.Post(parts.path, headers, req.body, req.content_type);
    if (!res)
        throw NetworkError("POST " + req.url + " failed: " + httplib::to_string(res.error()));
    return HttpResponse{res->status, res->body};
}

}  // namespace fincast::detail
