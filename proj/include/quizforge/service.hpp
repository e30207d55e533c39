#ifndef QUIZFORGE_SERVICE_HPP
#define QUIZFORGE_SERVICE_HPP

#include <algorithm>
#include <cctype>
#include <functional>
#include <string>
#include <utility>

#include "httplib.h"
#include "quizforge/api.hpp"
#include "quizforge/bank.hpp"

namespace quizforge {

/// JSON-over-HTTP front end for the review board.
///
///   POST /materials                      text upload -> {"id"}
///   GET  /materials/{id}/stats           CorpusStats
///   POST /materials/{id}/generate        GenerateRequest -> question list
///   GET  /materials/{id}/questions       ?status=suggested|accepted|rejected
///   POST /questions/{id}/accept|reject   updated question
///   POST /materials/{id}/bank            ExamMeta -> {"count"}
///   GET  /bank/export                    ?subject=&session=
class Service {
 public:
  Service(Store& store, Engine engine, std::string ui_origin = "*")
      : store_(store), engine_(std::move(engine)) {
    server_.set_default_headers({
        {"Access-Control-Allow-Origin", ui_origin},
        {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
        {"Access-Control-Allow-Headers", "Content-Type"},
    });
    server_.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server_.Post("/materials", wrap([this](const auto& req, auto& res) { upload(req, res); }));
    server_.Get("/materials/:id/stats", wrap([this](const auto& req, auto& res) {
      reply(res, to_json(engine_.stats(store_.material(req.path_params.at("id")))));
    }));
    server_.Post("/materials/:id/generate", wrap([this](const auto& req, auto& res) { generate(req, res); }));
    server_.Get("/materials/:id/questions", wrap([this](const auto& req, auto& res) {
      std::optional<ReviewStatus> status;
      if (req.has_param("status")) status = parse_status(req.get_param_value("status"));
      reply(res, to_json(store_.questions(req.path_params.at("id"), status)));
    }));
    server_.Post("/questions/:id/accept", wrap([this](const auto& req, auto& res) {
      reply(res, to_json(store_.review(req.path_params.at("id"), Decision::Accept)));
    }));
    server_.Post("/questions/:id/reject", wrap([this](const auto& req, auto& res) {
      reply(res, to_json(store_.review(req.path_params.at("id"), Decision::Reject)));
    }));
    server_.Post("/materials/:id/bank", wrap([this](const auto& req, auto& res) {
      const auto meta = exam_meta_from_json(parse_body(req));
      Json j;
      j["count"] = store_.bank_accepted(req.path_params.at("id"), meta).size();
      reply(res, j);
    }));
    server_.Get("/bank/export", wrap([this](const auto& req, auto& res) {
      BankFilter filter;
      if (req.has_param("subject")) filter.subject = req.get_param_value("subject");
      if (req.has_param("session")) filter.session = req.get_param_value("session");
      res.set_content(store_.export_bank(filter), "application/json");
    }));
  }

  httplib::Server& server() { return server_; }

  bool listen(const std::string& host, int port) { return server_.listen(host, port); }
  int bind_to_any_port(const std::string& host) { return server_.bind_to_any_port(host); }
  bool listen_after_bind() { return server_.listen_after_bind(); }
  void wait_until_ready() const { server_.wait_until_ready(); }
  void stop() { server_.stop(); }

 private:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  static Handler wrap(Handler inner) {
    return [inner = std::move(inner)](const httplib::Request& req, httplib::Response& res) {
      try {
        inner(req, res);
      } catch (const Error& e) {
        res.status = http_status(e.code());
        res.set_content(render(error_json(e)), "application/json");
      } catch (const Json::exception& e) {
        const Error err(ErrorCode::InvalidArgument, e.what());
        res.status = 400;
        res.set_content(render(error_json(err)), "application/json");
      }
    };
  }

  static void reply(httplib::Response& res, const Json& j) { res.set_content(render(j), "application/json"); }

  static Json parse_body(const httplib::Request& req) {
    if (utf8::trim(req.body).empty()) return Json();
    return Json::parse(req.body);
  }

  static bool looks_like_pdf(const std::string& content_type, const std::string& filename, const std::string& body) {
    std::string lower_name = filename;
    std::transform(lower_name.begin(), lower_name.end(), lower_name.begin(), [](unsigned char c) { return std::tolower(c); });
    return content_type.find("application/pdf") != std::string::npos ||
           (lower_name.size() >= 4 && lower_name.compare(lower_name.size() - 4, 4, ".pdf") == 0) ||
           body.rfind("%PDF-", 0) == 0;
  }

  // Accepts a raw text body (title from ?title=) or a multipart form with a
  // "file" part (title from its filename).
  void upload(const httplib::Request& req, httplib::Response& res) {
    std::string body = req.body;
    std::string title = req.has_param("title") ? req.get_param_value("title") : "";
    std::string content_type = req.get_header_value("Content-Type");
    if (req.is_multipart_form_data()) {
      if (!req.has_file("file")) throw Error(ErrorCode::InvalidArgument, "multipart upload needs a \"file\" part");
      const auto file = req.get_file_value("file");
      body = file.content;
      content_type = file.content_type;
      if (title.empty()) title = file.filename;
    }
    if (looks_like_pdf(content_type, title, body))
      throw Error(ErrorCode::UnsupportedMediaType, "only plain-text materials are accepted; convert PDFs to text first");
    if (!utf8::is_valid(body)) throw Error(ErrorCode::InvalidArgument, "material is not valid UTF-8");
    const auto material = make_material(title, body);
    Json j;
    j["id"] = store_.store_material(material);
    reply(res, j);
  }

  void generate(const httplib::Request& req, httplib::Response& res) {
    const auto& id = req.path_params.at("id");
    const auto material = store_.material(id);
    const auto request = generate_request_from_json(parse_body(req), id);
    reply(res, to_json(store_.save_questions(engine_.generate(material, request))));
  }

  Store& store_;
  Engine engine_;
  httplib::Server server_;
};

}  // namespace quizforge

#endif
