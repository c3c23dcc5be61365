#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace fincast::agents {

/// Role-conditioned agent description.
struct AgentSpec {
    std::string role;
    std::string goal;
    std::string backstory;
    std::vector<std::string> tools;  // tool names this agent may run
};

/// One unit of work; description may contain {placeholder} tokens substituted
/// from the run inputs.
struct TaskSpec {
    std::string id;
    std::string description;
    std::string expected_output;
    std::string assigned_agent;  // must match a configured agent role
};

/// Chat-backend wire unit.
struct Message {
    std::string author_role;  // "system" | "user" | "assistant"
    std::string content;
};

struct ToolInvocation {
    std::string tool;
    std::string detail;  // e.g. the URL a scrape tool was bound to
    std::size_t bytes = 0;
    bool ok = false;
    std::string note;  // failure note when !ok
};

struct CrewLogEntry {
    std::string task_id;
    std::string agent_role;
    std::vector<Message> prompt;
    std::string reply;
    std::vector<ToolInvocation> tool_invocations;
};

/// Ordered transcript of a crew run; final_answer is the last task's reply.
struct CrewRunLog {
    std::vector<CrewLogEntry> entries;
    std::string final_answer;
};

/// Completion provider. Implementations must be synchronous; one crew run
/// calls complete() once per task.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string complete(const std::vector<Message>& messages) = 0;
};

/// Replays a fixed list of replies in order; throws BackendError when
/// exhausted. The workhorse for deterministic tests and offline demos.
class ScriptedBackend : public ChatBackend {
public:
    explicit ScriptedBackend(std::vector<std::string> replies) : replies_(std::move(replies)) {}
    std::string complete(const std::vector<Message>& messages) override;

private:
    std::vector<std::string> replies_;
    std::size_t next_ = 0;
};

/// Echoes the last user message back; handy for plumbing tests.
class EchoBackend : public ChatBackend {
public:
    std::string complete(const std::vector<Message>& messages) override;
};

/// OpenAI-compatible chat-completions client: POSTs
/// {model, messages, temperature} with bearer auth and returns the first
/// choice's message content.
class HttpChatBackend : public ChatBackend {
public:
    HttpChatBackend(std::string endpoint, std::string model, std::string api_key,
                    double temperature = 0.0,
                    std::chrono::seconds timeout = std::chrono::seconds{30});
    std::string complete(const std::vector<Message>& messages) override;

private:
    std::string endpoint_;
    std::string model_;
    std::string api_key_;
    double temperature_;
    std::chrono::seconds timeout_;
};

/// Extracts choices[0].message.content; throws MalformedResponse otherwise.
std::string parse_chat_completion(const std::string& body);

/// Strips <script>/<style> blocks and all tags, decodes the common entities,
/// collapses whitespace.
std::string html_to_text(const std::string& html);

/// Fetches a page and reduces it to plain text, truncated to 8,000 characters
/// (marker included). Throws NetworkError / HttpStatusError / EmptyContent.
std::string scrape_website(const std::string& url,
                           std::chrono::seconds timeout = std::chrono::seconds{30});

/// Caps a tool payload at the 8,000-character prompt budget.
std::string truncate_tool_output(std::string text);

/// Named tool bound at configuration time. `detail` lands in the run log
/// (for the scrape tool: its URL).
struct Tool {
    std::string name;
    std::string detail;
    std::function<std::string(const std::map<std::string, std::string>& inputs)> fn;
};

Tool make_scrape_tool(const std::string& url,
                      std::chrono::seconds timeout = std::chrono::seconds{30});

/// Prior task output handed to later tasks.
struct PriorOutput {
    std::string task_id;
    std::string agent_role;
    std::string output;
};

/// Tool result injected into a prompt.
struct ToolResult {
    std::string name;
    std::string detail;
    std::string content;
    bool ok = true;
};

/// Renders the two-message prompt for one task: a system message built from
/// the agent spec and a user message holding the substituted description,
/// tool results, prior-task context and expected output. Deterministic.
/// Throws MissingPlaceholder when the description references an input that
/// was not provided.
std::vector<Message> render_prompt(const AgentSpec& agent, const TaskSpec& task,
                                   const std::map<std::string, std::string>& inputs,
                                   const std::vector<PriorOutput>& context,
                                   const std::vector<ToolResult>& tool_results = {});

/// Executes tasks strictly in declaration order. Task k's reply is appended
/// to task k+1's context. Tools listed by a task's agent run before its
/// completion call; tool failures are logged and surfaced in the prompt but
/// never abort the run. Backend failures abort with BackendError carrying
/// the task id.
CrewRunLog run_crew(const std::vector<AgentSpec>& agents, const std::vector<TaskSpec>& tasks,
                    ChatBackend& backend, const std::map<std::string, Tool>& tools,
                    const std::map<std::string, std::string>& inputs);

/// One JSON object per log entry, then a final-answer line.
std::string to_jsonl(const CrewRunLog& log);

// Default two-agent support crew (see agent_templates.hpp for the wording).
AgentSpec default_support_agent();
AgentSpec default_qa_agent();
std::vector<TaskSpec> default_support_tasks();

}  // namespace fincast::agents
