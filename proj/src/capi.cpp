#include "matmono/matmono.h"

#include <algorithm>
#include <cstring>
#include <string>

#include "divdiff.hpp"
#include "errors.hpp"
#include "funcmodel.hpp"
#include "report.hpp"

struct mm_function {
  matmono::FunctionSpec spec;
};

struct mm_report {
  matmono::Report report;
};

namespace {

thread_local std::string last_error;

mm_status ok() {
  last_error.clear();
  return MM_OK;
}

mm_status set_error(mm_status s, const std::string& message) {
  last_error = message;
  return s;
}

template <class F>
mm_status guard(F&& body) {
  try {
    return body();
  } catch (const matmono::Error& e) {
    return set_error(static_cast<mm_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return set_error(MM_ERR_SCHEMA, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(MM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(MM_ERR_INTERNAL, e.what());
  }
}

mm_status copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size();
  if (!buf) return cap == 0 ? ok() : set_error(MM_ERR_INVALID_ARGUMENT, "null buffer");
  if (cap == 0) return set_error(MM_ERR_BUFFER_TOO_SMALL, "buffer too small");
  const size_t n = std::min(cap - 1, s.size());
  std::memcpy(buf, s.data(), n);
  buf[n] = '\0';
  return n < s.size() ? set_error(MM_ERR_BUFFER_TOO_SMALL, "buffer too small") : ok();
}

}  // namespace

extern "C" {

const char* mm_version(void) { return matmono::kToolVersion; }

const char* mm_last_error(void) { return last_error.c_str(); }

mm_status mm_function_parse(const char* text, mm_function** out) {
  if (!text || !out) return set_error(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guard([&] {
    *out = new mm_function{matmono::parse_function(text)};
    return ok();
  });
}

void mm_function_free(mm_function* f) { delete f; }

mm_status mm_function_eval(const mm_function* f, double t, double* out) {
  if (!f || !out) return set_error(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    *out = f->spec.eval(t);
    return ok();
  });
}

mm_status mm_function_derivative(const mm_function* f, double t, int k, double* out) {
  if (!f || !out) return set_error(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    *out = f->spec.derivative(t, k);
    return ok();
  });
}

mm_status mm_function_text(const mm_function* f, char* buf, size_t cap, size_t* needed) {
  if (!f) return set_error(MM_ERR_INVALID_ARGUMENT, "null function");
  return guard([&] { return copy_out(f->spec.text(), buf, cap, needed); });
}

mm_status mm_divided_difference(const mm_function* f, const double* nodes, size_t count, double* out) {
  if (!f || !out || (!nodes && count)) return set_error(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    *out = matmono::divided_difference(f->spec, std::span<const double>(nodes, count));
    return ok();
  });
}

mm_status mm_run(const char* config_json, mm_report** out) {
  if (!config_json || !out) return set_error(MM_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guard([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      return set_error(MM_ERR_INVALID_ARGUMENT, std::string("config is not JSON: ") + e.what());
    }
    auto* r = new mm_report{matmono::run(matmono::config_from_json(j))};
    *out = r;
    return ok();
  });
}

mm_status mm_report_render(const mm_report* r, const char* format, char* buf, size_t cap, size_t* needed) {
  if (!r || !format) return set_error(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guard([&] { return copy_out(matmono::render(r->report, matmono::parse_format(format)), buf, cap, needed); });
}

int mm_report_exit_code(const mm_report* r) { return r ? matmono::exit_code(r->report) : 2; }

void mm_report_free(mm_report* r) { delete r; }

mm_status mm_recheck(const char* document_json, int* confirmed, int* checked) {
  if (!document_json || !confirmed) return set_error(MM_ERR_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(document_json);
    } catch (const nlohmann::json::parse_error& e) {
      return set_error(MM_ERR_SCHEMA, std::string("not JSON: ") + e.what());
    }
    const matmono::RecheckResult r = matmono::recheck_document(j);
    *confirmed = r.checked > 0 && r.confirmed == r.checked;
    if (checked) *checked = r.checked;
    if (!*confirmed) {
      last_error = r.checked == 0 ? "no certificates found" : r.failures.front();
      return MM_OK;
    }
    return ok();
  });
}

}  // extern "C"
