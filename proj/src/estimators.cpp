#include "misest/estimators.hpp"

#include <string>

namespace misest {

Method parse_method(std::string_view name) {
  if (name == "uis") return Method::Uis;
  if (name == "mk") return Method::Mk;
  if (name == "mis") return Method::Mis;
  if (name == "misadj") return Method::MisAdj;
  throw Error("unknown method '" + std::string(name) + "' (expected uis, mk, mis or misadj)");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Uis:
      return "uis";
    case Method::Mk:
      return "mk";
    case Method::Mis:
      return "mis";
    case Method::MisAdj:
      return "misadj";
  }
  return "?";
}

}  // namespace misest
