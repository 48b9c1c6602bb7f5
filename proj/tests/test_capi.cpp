#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include <matmono/matmono.h>

namespace {

int failures = 0;

void expect(bool ok, const char* what) {
  if (!ok) {
    std::printf("FAILED: %s (%s)\n", what, mm_last_error());
    ++failures;
  }
}

}  // namespace

int main() {
  expect(std::strlen(mm_version()) > 0, "version");

  mm_function* f = nullptr;
  expect(mm_function_parse("poly:1,2,3", &f) == MM_OK, "parse");
  double v = 0;
  expect(mm_function_eval(f, 2.0, &v) == MM_OK && v == 17.0, "eval");
  expect(mm_function_derivative(f, 2.0, 1, &v) == MM_OK && v == 14.0, "derivative");
  const double nodes[3] = {0.0, 1.0, 1.0};
  expect(mm_divided_difference(f, nodes, 3, &v) == MM_OK && std::fabs(v - 3.0) < 1e-12, "divided difference");

  size_t needed = 0;
  expect(mm_function_text(f, nullptr, 0, &needed) == MM_OK && needed > 0, "text length query");
  char small[4];
  expect(mm_function_text(f, small, sizeof small, &needed) == MM_ERR_BUFFER_TOO_SMALL, "text too small");
  std::string buf(needed + 1, '\0');
  expect(mm_function_text(f, buf.data(), buf.size(), &needed) == MM_OK, "text");
  expect(std::string(buf.c_str()).rfind("poly:", 0) == 0, "text content");
  expect(mm_function_eval(f, 2.0, nullptr) == MM_ERR_INVALID_ARGUMENT, "null out");
  mm_function_free(f);

  mm_function* g = nullptr;
  expect(mm_function_parse("poly:1,,2", &g) == MM_ERR_PARSE && g == nullptr, "parse error");
  expect(std::strlen(mm_last_error()) > 0, "error message");
  expect(mm_function_parse("sqrt", &g) == MM_OK, "sqrt");
  expect(mm_function_eval(g, -1.0, &v) == MM_ERR_DOMAIN, "domain error");
  mm_function_free(g);

  mm_report* r = nullptr;
  expect(mm_run("{\"command\":\"classify\",\"function\":\"poly:0,0,1\",\"trials\":200}", &r) == MM_OK, "run");
  expect(mm_report_exit_code(r) == 0, "exit code");
  expect(mm_report_render(r, "json", nullptr, 0, &needed) == MM_OK, "render size");
  std::string json(needed + 1, '\0');
  expect(mm_report_render(r, "json", json.data(), json.size(), nullptr) == MM_OK, "render");
  json.resize(needed);
  expect(json.find("\"FAIL\"") != std::string::npos, "verdict in json");
  expect(mm_report_render(r, "xml", nullptr, 0, &needed) == MM_ERR_INVALID_ARGUMENT, "bad format");
  mm_report_free(r);

  int confirmed = 0, checked = 0;
  expect(mm_recheck(json.c_str(), &confirmed, &checked) == MM_OK && confirmed == 1 && checked == 1, "recheck");
  std::string tampered = json;
  for (std::size_t p = tampered.find("poly:0,0,1"); p != std::string::npos; p = tampered.find("poly:0,0,1", p + 1))
    tampered.replace(p, 10, "poly:0,1,0");
  expect(mm_recheck(tampered.c_str(), &confirmed, &checked) == MM_OK && confirmed == 0, "tampered recheck");
  expect(mm_recheck("{", &confirmed, &checked) == MM_ERR_SCHEMA, "malformed document");

  expect(mm_run("{\"command\":\"classify\"}", &r) == MM_ERR_INVALID_ARGUMENT && r == nullptr, "missing function");
  expect(mm_run("not json", &r) != MM_OK, "bad json");

  std::printf(failures ? "capi: %d failure(s)\n" : "capi: ok\n", failures);
  return failures ? 1 : 0;
}
