#include <cmath>

// Eigen must come first: <resolv.h>, pulled in by httplib, defines a `_res`
// macro that breaks Eigen's headers.
#include "gazeform/error.hpp"
#include "gazeform/pipeline.hpp"

#include <httplib.h>

namespace gazeform {

namespace {

class ExternalAgent final : public Agent {
public:
    ExternalAgent(std::string name, const std::string& endpoint, double timeout_s)
        : name_(std::move(name)), timeout_s_(timeout_s) {
        const auto scheme = endpoint.find("://");
        if (scheme == std::string::npos) throw InputError("endpoint '" + endpoint + "' has no scheme");
        const auto slash = endpoint.find('/', scheme + 3);
        base_ = endpoint.substr(0, slash);
        path_ = slash == std::string::npos ? "/" : endpoint.substr(slash);
    }

    AgentResponse call(const AgentRequest& request) override {
        httplib::Client client(base_);
        const auto sec = static_cast<time_t>(timeout_s_);
        const auto usec = static_cast<time_t>(std::lround((timeout_s_ - static_cast<double>(sec)) * 1e6));
        client.set_connection_timeout(sec, usec);
        client.set_read_timeout(sec, usec);
        client.set_write_timeout(sec, usec);

        auto result = client.Post(path_, encode_agent_request(request), "application/json");
        if (!result) {
            throw AgentError(name_ + ": request to " + base_ + path_ + " failed (" + httplib::to_string(result.error()) +
                             ")");
        }
        if (result->status != 200) {
            throw AgentError(name_ + ": HTTP status " + std::to_string(result->status));
        }
        AgentResponse response;
        try {
            response = decode_agent_response(result->body);
        } catch (const InputError& e) {
            throw AgentError(name_ + ": " + e.what());
        }
        if (response.status != "ok") {
            throw AgentError(name_ + ": agent reported '" + response.status + "'" +
                             (response.text.empty() ? "" : ": " + response.text));
        }
        return response;
    }

private:
    std::string name_;
    std::string base_;
    std::string path_;
    double timeout_s_;
};

}  // namespace

std::unique_ptr<Agent> make_external_agent(const std::string& name, const std::string& endpoint, double timeout_s) {
    if (!(timeout_s > 0.0)) throw InputError("timeout must be positive");
    return std::make_unique<ExternalAgent>(name, endpoint, timeout_s);
}

}  // namespace gazeform
