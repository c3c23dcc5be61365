#include <doctest.h>

#include <httplib.h>

#include <json.hpp>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "fincast/agent_templates.hpp"
#include "fincast/agents.hpp"
#include "fincast/errors.hpp"
#include "test_support.hpp"

using namespace fincast;
using namespace fincast::agents;

TEST_CASE("html_to_text strips tags, scripts and styles") {
    CHECK(html_to_text("<p>Hello <b>world</b></p><script>x()</script>") == "Hello world");
    CHECK(html_to_text("plain text, no tags  ") == "plain text, no tags");
    CHECK(html_to_text("<style>a{color:red}</style><div>x</div>") == "x");
    CHECK(html_to_text("a &amp; b &lt;ok&gt;") == "a & b <ok>");
    CHECK(html_to_text("  lots\n\nof\t whitespace ") == "lots of whitespace");
}

TEST_CASE("html_to_text handles the fixture page") {
    const auto text = html_to_text(testsupport::read_fixture("page.html"));
    CHECK(text.find("Adding memory") != std::string::npos);
    CHECK(text.find("memory=True") != std::string::npos);
    CHECK(text.find("console.log") == std::string::npos);
    CHECK(text.find("color:") == std::string::npos);
    CHECK(text.find("That's all.") != std::string::npos);
}

TEST_CASE("truncate_tool_output caps at 8000 characters with a marker") {
    const std::string big(20000, 'x');
    const auto cut = truncate_tool_output(big);
    CHECK(cut.size() == 8000);
    CHECK(cut.substr(cut.size() - std::string(templates::kTruncationMarker).size()) ==
          templates::kTruncationMarker);

    const std::string small(100, 'y');
    CHECK(truncate_tool_output(small) == small);
}

TEST_CASE("render_prompt substitutes placeholders") {
    const auto agent = default_support_agent();
    const auto tasks = default_support_tasks();
    const std::map<std::string, std::string> inputs{
        {"question", "How do I add memory to my crew?"}, {"person", "Andrew"}};

    const auto messages = render_prompt(agent, tasks[0], inputs, {});
    REQUIRE(messages.size() == 2);
    CHECK(messages[0].author_role == "system");
    CHECK(messages[0].content.find(agent.role) != std::string::npos);
    CHECK(messages[0].content.find(agent.goal) != std::string::npos);
    CHECK(messages[1].author_role == "user");
    CHECK(messages[1].content.find("How do I add memory to my crew?") != std::string::npos);
    CHECK(messages[1].content.find("Andrew") != std::string::npos);

    // empty context: no context section
    CHECK(messages[1].content.find(templates::kContextSectionHeader) == std::string::npos);
}

TEST_CASE("render_prompt rejects missing placeholders") {
    const auto agent = default_support_agent();
    const auto tasks = default_support_tasks();
    const std::map<std::string, std::string> inputs{{"question", "hi"}};  // no person
    CHECK_THROWS_AS(render_prompt(agent, tasks[0], inputs, {}), MissingPlaceholder);
}

TEST_CASE("render_prompt includes tool results and prior context") {
    const auto agent = default_qa_agent();
    const auto tasks = default_support_tasks();
    const std::map<std::string, std::string> inputs{{"question", "q"}, {"person", "p"}};
    const std::vector<PriorOutput> context{{"query_solving", "Senior Support Representative",
                                            "the draft answer"}};
    const std::vector<ToolResult> tools{{"scrape_website", "http://x", "page text", true}};
    const auto messages = render_prompt(agent, tasks[1], inputs, context, tools);
    const auto& user = messages[1].content;
    CHECK(user.find(templates::kToolSectionHeader) != std::string::npos);
    CHECK(user.find("page text") != std::string::npos);
    CHECK(user.find(templates::kContextSectionHeader) != std::string::npos);
    CHECK(user.find("the draft answer") != std::string::npos);
    CHECK(user.find("[query_solving by Senior Support Representative]") != std::string::npos);
}

TEST_CASE("render_prompt truncates oversized tool payloads to the 8000-char budget") {
    const auto agent = default_support_agent();
    const auto tasks = default_support_tasks();
    const std::map<std::string, std::string> inputs{{"question", "q"}, {"person", "p"}};
    const std::vector<ToolResult> tools{{"scrape_website", "u", std::string(50000, 'q'), true}};
    const auto messages = render_prompt(agent, tasks[0], inputs, {}, tools);
    // the tool body inside the prompt is capped even if the caller forgot to cut it
    const auto& user = messages[1].content;
    std::size_t longest_run = 0, run = 0;
    for (char c : user) {
        run = c == 'q' ? run + 1 : 0;
        longest_run = std::max(longest_run, run);
    }
    CHECK(longest_run <= 8000);
}

TEST_CASE("run_crew: two tasks, echo backend") {
    EchoBackend backend;
    const std::vector<AgentSpec> crew{default_support_agent(), default_qa_agent()};
    const std::map<std::string, std::string> inputs{{"question", "What is a crew?"},
                                                    {"person", "Sam"}};
    const auto log = run_crew(crew, default_support_tasks(), backend, {}, inputs);
    REQUIRE(log.entries.size() == 2);
    CHECK(log.entries[0].agent_role == "Senior Support Representative");
    CHECK(log.entries[1].agent_role == "Support Quality Assurance Specialist");
    CHECK(log.final_answer == log.entries[1].reply);
}

TEST_CASE("run_crew: zero tasks is an error") {
    EchoBackend backend;
    CHECK_THROWS_AS(run_crew({default_support_agent()}, {}, backend, {}, {}), NoTasks);
}

TEST_CASE("run_crew: scripted stub wires task 1's reply into task 2's prompt") {
    ScriptedBackend backend({"DRAFT", "FINAL"});
    const std::vector<AgentSpec> crew{default_support_agent(), default_qa_agent()};
    const std::map<std::string, std::string> inputs{{"question", "q"}, {"person", "p"}};
    const auto log = run_crew(crew, default_support_tasks(), backend, {}, inputs);
    REQUIRE(log.entries.size() == 2);
    CHECK(log.final_answer == "FINAL");
    CHECK(log.entries[1].prompt[1].content.find("DRAFT") != std::string::npos);
}

TEST_CASE("run_crew: deterministic byte-identical transcript with a stub") {
    const auto run_once = [] {
        ScriptedBackend backend({"DRAFT", "FINAL"});
        const std::vector<AgentSpec> crew{default_support_agent(), default_qa_agent()};
        const std::map<std::string, std::string> inputs{{"question", "q"}, {"person", "p"}};
        return to_jsonl(run_crew(crew, default_support_tasks(), backend, {}, inputs));
    };
    CHECK(run_once() == run_once());
}

TEST_CASE("run_crew: tool failure is non-fatal and lands in the prompt") {
    ScriptedBackend backend({"DRAFT", "FINAL"});
    const std::vector<AgentSpec> crew{default_support_agent(), default_qa_agent()};
    const std::map<std::string, std::string> inputs{{"question", "q"}, {"person", "p"}};

    std::map<std::string, Tool> tools;
    tools.emplace("scrape_website",
                  Tool{"scrape_website", "http://broken",
                       [](const std::map<std::string, std::string>&) -> std::string {
                           throw NetworkError("connection refused");
                       }});

    const auto log = run_crew(crew, default_support_tasks(), backend, tools, inputs);
    REQUIRE(log.entries.size() == 2);
    REQUIRE(log.entries[0].tool_invocations.size() == 1);
    CHECK_FALSE(log.entries[0].tool_invocations[0].ok);
    CHECK(log.entries[0].prompt[1].content.find("failed") != std::string::npos);
    CHECK(log.final_answer == "FINAL");
}

TEST_CASE("run_crew: successful tool output reaches the prompt and log") {
    ScriptedBackend backend({"DRAFT", "FINAL"});
    const std::vector<AgentSpec> crew{default_support_agent(), default_qa_agent()};
    const std::map<std::string, std::string> inputs{{"question", "q"}, {"person", "p"}};

    std::map<std::string, Tool> tools;
    tools.emplace("scrape_website",
                  Tool{"scrape_website", "http://docs",
                       [](const std::map<std::string, std::string>&) {
                           return std::string("memory=True enables shared history");
                       }});

    const auto log = run_crew(crew, default_support_tasks(), backend, tools, inputs);
    REQUIRE(log.entries[0].tool_invocations.size() == 1);
    CHECK(log.entries[0].tool_invocations[0].ok);
    CHECK(log.entries[0].tool_invocations[0].bytes == 34);
    CHECK(log.entries[0].prompt[1].content.find("memory=True enables") != std::string::npos);
    // QA task's agent lists no tools
    CHECK(log.entries[1].tool_invocations.empty());
}

TEST_CASE("run_crew: backend failure carries the task id") {
    ScriptedBackend backend({"only one reply"});
    const std::vector<AgentSpec> crew{default_support_agent(), default_qa_agent()};
    const std::map<std::string, std::string> inputs{{"question", "q"}, {"person", "p"}};
    try {
        run_crew(crew, default_support_tasks(), backend, {}, inputs);
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(std::string(e.what()).find("quality_inspection") != std::string::npos);
    }
}

TEST_CASE("property: every entry's prompt embeds the previous reply verbatim") {
    std::vector<AgentSpec> crew{default_support_agent(), default_qa_agent()};
    std::vector<TaskSpec> tasks;
    std::vector<std::string> replies;
    for (int i = 0; i < 4; ++i) {
        TaskSpec task;
        task.id = "task_" + std::to_string(i);
        task.description = "Step {question} #" + std::to_string(i);
        task.expected_output = "out";
        task.assigned_agent = i % 2 == 0 ? crew[0].role : crew[1].role;
        tasks.push_back(task);
        replies.push_back("reply-" + std::to_string(i) + "-xyzzy");
    }
    ScriptedBackend backend(replies);
    const auto log =
        run_crew(crew, tasks, backend, {}, {{"question", "42"}, {"person", "p"}});
    REQUIRE(log.entries.size() == 4);
    for (std::size_t k = 0; k + 1 < log.entries.size(); ++k)
        CHECK(log.entries[k + 1].prompt[1].content.find(log.entries[k].reply) !=
              std::string::npos);
    CHECK(log.entries[0].task_id == "task_0");
    CHECK(log.final_answer == "reply-3-xyzzy");
}

TEST_CASE("parse_chat_completion extracts the first choice") {
    const auto content =
        parse_chat_completion(testsupport::read_fixture("chat_completion.json"));
    CHECK(content == "Paris is the capital of France.");

    CHECK_THROWS_AS(parse_chat_completion("{"), MalformedResponse);
    CHECK_THROWS_AS(parse_chat_completion("{\"choices\":[]}"), MalformedResponse);
    CHECK_THROWS_AS(parse_chat_completion("{\"choices\":[{\"message\":{}}]}"),
                    MalformedResponse);
}

TEST_CASE("scrape_website and http backend against a local server") {
    httplib::Server server;
    std::string seen_auth;
    std::string seen_body;
    server.Get("/page", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("<p>Hello <b>world</b></p><script>x()</script>", "text/html");
    });
    server.Get("/plain", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("  already text  ", "text/plain");
    });
    server.Get("/huge", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("<p>" + std::string(30000, 'z') + "</p>", "text/html");
    });
    server.Get("/empty", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("<script>only scripts</script>", "text/html");
    });
    server.Post("/v1/chat/completions",
                [&](const httplib::Request& req, httplib::Response& res) {
                    seen_auth = req.get_header_value("Authorization");
                    seen_body = req.body;
                    if (seen_auth != "Bearer test-key") {
                        res.status = 401;
                        res.set_content("{\"error\":\"unauthorized\"}", "application/json");
                        return;
                    }
                    res.set_content(testsupport::read_fixture("chat_completion.json"),
                                    "application/json");
                });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    const std::string base = "http://127.0.0.1:" + std::to_string(port);

    SUBCASE("html page is stripped") {
        CHECK(scrape_website(base + "/page") == "Hello world");
    }
    SUBCASE("plain text comes back trimmed") {
        CHECK(scrape_website(base + "/plain") == "already text");
    }
    SUBCASE("oversized pages are truncated to the 8000-char budget") {
        const auto text = scrape_website(base + "/huge");
        CHECK(text.size() == 8000);
    }
    SUBCASE("page with no text is EmptyContent") {
        CHECK_THROWS_AS(scrape_website(base + "/empty"), EmptyContent);
    }
    SUBCASE("404 is HttpStatusError") {
        try {
            scrape_website(base + "/missing");
            FAIL("expected HttpStatusError");
        } catch (const HttpStatusError& e) {
            CHECK(e.status() == 404);
        }
    }
    SUBCASE("chat backend posts model/messages and returns the content") {
        HttpChatBackend backend(base + "/v1/chat/completions", "llama3-8b-8192", "test-key");
        const std::vector<Message> messages{{"system", "sys"}, {"user", "hi"}};
        CHECK(backend.complete(messages) == "Paris is the capital of France.");
        CHECK(seen_auth == "Bearer test-key");
        const auto payload = nlohmann::json::parse(seen_body);
        CHECK(payload["model"] == "llama3-8b-8192");
        CHECK(payload["temperature"] == 0.0);
        REQUIRE(payload["messages"].size() == 2);
        CHECK(payload["messages"][0]["role"] == "system");
        CHECK(payload["messages"][1]["content"] == "hi");
    }
    SUBCASE("401 is HttpStatusError") {
        HttpChatBackend backend(base + "/v1/chat/completions", "llama3-8b-8192", "wrong");
        try {
            backend.complete({{"user", "hi"}});
            FAIL("expected HttpStatusError");
        } catch (const HttpStatusError& e) {
            CHECK(e.status() == 401);
        }
    }

    server.stop();
    thread.join();
}
