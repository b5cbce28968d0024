/*
   Copyright 2026 The whc authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <iostream>
#include <string>
#include <vector>

#include "whc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    whc::cli::RunOutcome out = whc::cli::run(args);

    if (out.report.contains("help")) {
        std::cout << out.report["help"].get<std::string>();
        return out.exit_code;
    }
    // Tables go to stdout unless redirected by --csv; the JSON report follows
    // on stdout unless --out captured it.  Parse errors land on stderr.
    if (!out.csv.empty() && out.csv_path.empty()) std::cout << out.csv;
    if (!out.report.is_null() && out.report_path.empty()) {
        if (out.exit_code == 3 && out.report.contains("error") &&
            out.report.size() <= 2) {
            std::cerr << "whc: " << out.report["error"].get<std::string>()
                      << '\n';
        } else if (out.csv.empty() || !out.csv_path.empty()) {
            std::cout << out.report.dump(2) << '\n';
        }
    }
    return out.exit_code;
}
