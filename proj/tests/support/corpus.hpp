#pragma once

#include <string>
#include <vector>

namespace remora::testing {

// A corpus file with the expectations written in its header comments:
//   ; type: <type>   ; expect: <stdout line>   ; exit: <status>
struct CorpusProgram {
  std::string name;
  std::string path;
  std::string source;
  std::string type;
  std::string expect;
  int exit_code = 0;
};

std::vector<CorpusProgram> load_corpus();

}  // namespace remora::testing
