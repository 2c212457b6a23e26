#include "corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace remora::testing {

std::vector<CorpusProgram> load_corpus() {
  namespace fs = std::filesystem;
  std::vector<CorpusProgram> out;
  for (const auto& entry : fs::directory_iterator(REMORA_CORPUS)) {
    if (entry.path().extension() != ".remora") continue;
    CorpusProgram p;
    p.name = entry.path().stem().string();
    p.path = entry.path().string();
    std::ifstream in(entry.path());
    std::stringstream buf;
    buf << in.rdbuf();
    p.source = buf.str();
    std::istringstream lines(p.source);
    std::string line;
    auto field = [&](const std::string& key, std::string& dst) {
      std::string prefix = "; " + key + ": ";
      if (line.rfind(prefix, 0) == 0) dst = line.substr(prefix.size());
    };
    while (std::getline(lines, line)) {
      std::string code;
      field("type", p.type);
      field("expect", p.expect);
      field("exit", code);
      if (!code.empty()) p.exit_code = std::stoi(code);
    }
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

}  // namespace remora::testing
