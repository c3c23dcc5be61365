#include "fincast/agents.hpp"

#include <cctype>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "fincast/agent_templates.hpp"
#include "fincast/errors.hpp"
#include "http_client.hpp"

namespace fincast::agents {

namespace ts = templates;
using nlohmann::json;

// --- backends ---------------------------------------------------------------

std::string ScriptedBackend::complete(const std::vector<Message>&) {
    if (next_ >= replies_.size())
        throw BackendError("scripted backend exhausted after " + std::to_string(next_) +
                           " replies");
    return replies_[next_++];
}

std::string EchoBackend::complete(const std::vector<Message>& messages) {
    for (auto it = messages.rbegin(); it != messages.rend(); ++it)
        if (it->author_role == "user") return it->content;
    throw BackendError("echo backend: no user message to echo");
}

HttpChatBackend::HttpChatBackend(std::string endpoint, std::string model, std::string api_key,
                                 double temperature, std::chrono::seconds timeout)
    : endpoint_(std::move(endpoint)),
      model_(std::move(model)),
      api_key_(std::move(api_key)),
      temperature_(temperature),
      timeout_(timeout) {}

std::string HttpChatBackend::complete(const std::vector<Message>& messages) {
    json payload;
    payload["model"] = model_;
    payload["temperature"] = temperature_;
    payload["messages"] = json::array();
    for (const auto& m : messages)
        payload["messages"].push_back({{"role", m.author_role}, {"content", m.content}});

    detail::HttpPostRequest req;
    req.url = endpoint_;
    req.body = payload.dump();
    req.bearer_token = api_key_;
    req.timeout = timeout_;
    const auto res = detail::http_post(req);
    if (res.status != 200) throw HttpStatusError(res.status, endpoint_);
    return parse_chat_completion(res.body);
}

std::string parse_chat_completion(const std::string& body) {
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::parse_error& e) {
        throw MalformedResponse(std::string("chat completion is not valid JSON: ") + e.what());
    }
    if (!doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty())
        throw MalformedResponse("chat completion has no choices");
    const auto& first = doc["choices"][0];
    if (!first.contains("message") || !first["message"].contains("content") ||
        !first["message"]["content"].is_string())
        throw MalformedResponse("chat completion choice has no message content");
    return first["message"]["content"].get<std::string>();
}

// --- scrape tool --------------------------------------------------------------

std::string html_to_text(const std::string& html) {
    std::string out;
    out.reserve(html.size());

    const auto lower_at = [&](std::size_t pos, const char* word) {
        for (std::size_t i = 0; word[i]; ++i) {
            if (pos + i >= html.size()) return false;
            if (std::tolower(static_cast<unsigned char>(html[pos + i])) != word[i]) return false;
        }
        return true;
    };

    // Skip a <script>/<style> element including its body; returns the index
    // past the closing tag, or npos when the tag does not open such a block.
    const auto skip_block = [&](std::size_t pos) -> std::size_t {
        for (const char* block : {"script", "style"}) {
            const std::size_t name_end = pos + 1 + std::strlen(block);
            if (!lower_at(pos + 1, block)) continue;
            if (name_end < html.size() && html[name_end] != '>' && html[name_end] != ' ' &&
                html[name_end] != '\t' && html[name_end] != '\n' && html[name_end] != '/')
                continue;  // a longer tag name that merely starts with the word
            const std::string close = std::string("</") + block;
            std::size_t end = pos;
            while (end < html.size() && !lower_at(end, close.c_str())) ++end;
            end = html.find('>', end);
            return end == std::string::npos ? html.size() : end + 1;
        }
        return std::string::npos;
    };

    std::size_t i = 0;
    while (i < html.size()) {
        const char c = html[i];
        if (c == '<') {
            if (const std::size_t past = skip_block(i); past != std::string::npos) {
                i = past;
                continue;
            }
            const std::size_t end = html.find('>', i);
            i = end == std::string::npos ? html.size() : end + 1;
            out += ' ';  // tags separate words
        } else if (c == '&') {
            // The handful of entities that matter for plain text.
            static const std::pair<const char*, char> kEntities[] = {
                {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&#39;", '\''},
            };
            bool matched = false;
            for (const auto& [entity, repl] : kEntities) {
                if (html.compare(i, std::strlen(entity), entity) == 0) {
                    out += repl;
                    i += std::strlen(entity);
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                if (html.compare(i, 6, "&nbsp;") == 0) {
                    out += ' ';
                    i += 6;
                } else {
                    out += c;
                    ++i;
                }
            }
        } else {
            out += c;
            ++i;
        }
    }

    // Collapse all whitespace runs to single spaces.
    std::string collapsed;
    collapsed.reserve(out.size());
    bool in_space = true;  // also trims leading space
    for (char c : out) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!in_space) collapsed += ' ';
            in_space = true;
        } else {
            collapsed += c;
            in_space = false;
        }
    }
    while (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();
    return collapsed;
}

std::string truncate_tool_output(std::string text) {
    const std::size_t limit = static_cast<std::size_t>(ts::kToolOutputLimit);
    if (text.size() <= limit) return text;
    const std::string marker = ts::kTruncationMarker;
    text.resize(limit - marker.size());
    return text + marker;
}

std::string scrape_website(const std::string& url, std::chrono::seconds timeout) {
    if (url.rfind("http://", 0) != 0 && url.rfind("https://", 0) != 0)
        throw NetworkError("scrape_website: URL must be http or https: " + url);
    const auto res = detail::http_get(url, timeout);
    if (res.status != 200) throw HttpStatusError(res.status, url);
    std::string text = html_to_text(res.body);
    if (text.empty()) throw EmptyContent("scrape_website: page reduced to empty text: " + url);
    return truncate_tool_output(std::move(text));
}

Tool make_scrape_tool(const std::string& url, std::chrono::seconds timeout) {
    Tool tool;
    tool.name = "scrape_website";
    tool.detail = url;
    tool.fn = [url, timeout](const std::map<std::string, std::string>&) {
        return scrape_website(url, timeout);
    };
    return tool;
}

// --- prompt rendering ----------------------------------------------------------

namespace {

std::string substitute(const std::string& text, const std::map<std::string, std::string>& inputs) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '{') {
            std::size_t j = i + 1;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                       text[j] == '_'))
                ++j;
            if (j < text.size() && text[j] == '}' && j > i + 1) {
                const std::string key = text.substr(i + 1, j - i - 1);
                const auto it = inputs.find(key);
                if (it == inputs.end())
                    throw MissingPlaceholder("no input provided for placeholder {" + key + "}");
                out += it->second;
                i = j + 1;
                continue;
            }
        }
        out += text[i++];
    }
    return out;
}

}  // namespace

std::vector<Message> render_prompt(const AgentSpec& agent, const TaskSpec& task,
                                   const std::map<std::string, std::string>& inputs,
                                   const std::vector<PriorOutput>& context,
                                   const std::vector<ToolResult>& tool_results) {
    std::ostringstream system;
    system << ts::kSystemHeader << agent.role << ".\n";
    system << ts::kGoalPrefix << agent.goal << "\n";
    system << ts::kBackstoryPrefix << agent.backstory << "\n";
    system << ts::kToolsPrefix;
    if (agent.tools.empty()) {
        system << ts::kNoTools;
    } else {
        for (std::size_t i = 0; i < agent.tools.size(); ++i)
            system << (i ? ", " : "") << agent.tools[i];
    }

    std::ostringstream user;
    user << substitute(task.description, inputs);

    if (!tool_results.empty()) {
        user << "\n\n" << ts::kToolSectionHeader;
        for (const auto& tr : tool_results) {
            user << "\n[" << tr.name;
            if (!tr.detail.empty()) user << " " << tr.detail;
            user << "]\n" << truncate_tool_output(tr.content);
        }
    }
    if (!context.empty()) {
        user << "\n\n" << ts::kContextSectionHeader;
        for (const auto& prior : context)
            user << "\n[" << prior.task_id << " by " << prior.agent_role << "]\n" << prior.output;
    }
    if (!task.expected_output.empty())
        user << "\n\n" << ts::kExpectedOutputPrefix << task.expected_output;

    return {Message{"system", system.str()}, Message{"user", user.str()}};
}

// --- orchestration -----------------------------------------------------------

CrewRunLog run_crew(const std::vector<AgentSpec>& agents, const std::vector<TaskSpec>& tasks,
                    ChatBackend& backend, const std::map<std::string, Tool>& tools,
                    const std::map<std::string, std::string>& inputs) {
    if (tasks.empty()) throw NoTasks("run_crew: no tasks configured");

    std::map<std::string, const AgentSpec*> by_role;
    for (const auto& a : agents) by_role[a.role] = &a;
    for (const auto& t : tasks)
        if (!by_role.count(t.assigned_agent))
            throw Error("run_crew: task '" + t.id + "' assigned to unknown agent '" +
                        t.assigned_agent + "'");

    CrewRunLog log;
    std::vector<PriorOutput> context;
    for (const auto& task : tasks) {
        const AgentSpec& agent = *by_role.at(task.assigned_agent);

        std::vector<ToolResult> tool_results;
        std::vector<ToolInvocation> invocations;
        for (const auto& tool_name : agent.tools) {
            const auto it = tools.find(tool_name);
            if (it == tools.end()) continue;  // tool not wired for this run
            const Tool& tool = it->second;
            ToolInvocation inv;
            inv.tool = tool.name;
            inv.detail = tool.detail;
            try {
                std::string content = truncate_tool_output(tool.fn(inputs));
                inv.bytes = content.size();
                inv.ok = true;
                tool_results.push_back({tool.name, tool.detail, std::move(content), true});
            } catch (const Error& e) {
                // Tool failure degrades the answer but never kills the run.
                inv.ok = false;
                inv.note = e.what();
                tool_results.push_back(
                    {tool.name, tool.detail,
                     std::string("[tool ") + tool.name + " failed: " + e.what() + "]", false});
            }
            invocations.push_back(std::move(inv));
        }

        const auto prompt = render_prompt(agent, task, inputs, context, tool_results);
        std::string reply;
        try {
            reply = backend.complete(prompt);
        } catch (const Error& e) {
            throw BackendError("task '" + task.id + "': " + e.what());
        }

        context.push_back({task.id, agent.role, reply});
        log.entries.push_back({task.id, agent.role, prompt, reply, std::move(invocations)});
    }
    log.final_answer = log.entries.back().reply;
    return log;
}

std::string to_jsonl(const CrewRunLog& log) {
    std::ostringstream out;
    for (const auto& entry : log.entries) {
        json line;
        line["task_id"] = entry.task_id;
        line["agent_role"] = entry.agent_role;
        line["prompt"] = json::array();
        for (const auto& m : entry.prompt)
            line["prompt"].push_back({{"role", m.author_role}, {"content", m.content}});
        line["reply"] = entry.reply;
        line["tools"] = json::array();
        for (const auto& inv : entry.tool_invocations)
            line["tools"].push_back({{"tool", inv.tool},
                                     {"detail", inv.detail},
                                     {"bytes", inv.bytes},
                                     {"ok", inv.ok},
                                     {"note", inv.note}});
        out << line.dump() << "\n";
    }
    out << json{{"final_answer", log.final_answer}}.dump() << "\n";
    return out.str();
}

// --- default crew -----------------------------------------------------------

AgentSpec default_support_agent() {
    return AgentSpec{ts::kSupportRole, ts::kSupportGoal, ts::kSupportBackstory,
                     {"scrape_website"}};
}

AgentSpec default_qa_agent() {
    return AgentSpec{ts::kQaRole, ts::kQaGoal, ts::kQaBackstory, {}};
}

std::vector<TaskSpec> default_support_tasks() {
    return {
        TaskSpec{ts::kQueryTaskId, ts::kQueryTaskDescription, ts::kQueryTaskExpectedOutput,
                 ts::kSupportRole},
        TaskSpec{ts::kQaTaskId, ts::kQaTaskDescription, ts::kQaTaskExpectedOutput, ts::kQaRole},
    };
}

}  // namespace fincast::agents
