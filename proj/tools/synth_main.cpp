// Writes a synthetic crossing scenario plus a job file, for demos and smoke
// tests without a SUMO installation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "sumoviz/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic SUMO scenario"};
  std::string out_dir = "scenario";
  sumoviz::synthetic::CrossingOptions opt;
  app.add_option("-o,--output", out_dir, "Output directory");
  app.add_option("--vehicles", opt.vehicles, "Number of vehicles")->check(CLI::NonNegativeNumber);
  app.add_option("--duration", opt.duration, "Simulated seconds")->check(CLI::PositiveNumber);
  app.add_option("--trees", opt.trees, "Number of tree POIs")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", opt.seed, "Generator seed");
  std::string corridor;
  app.add_option("--corridor", corridor, "Also write a long corridor network to this file");
  CLI11_PARSE(app, argc, argv);

  try {
    const std::filesystem::path dir(out_dir);
    sumoviz::synthetic::write_scenario(sumoviz::synthetic::crossing(opt), dir);
    std::ofstream job(dir / "job.yaml");
    job << "inputs:\n"
           "  net: net.net.xml\n"
           "  fcd: fcd.xml\n"
           "  tls: tls.xml\n"
           "  pois: pois.add.xml\n"
           "time:\n"
           "  begin: 0\n"
           "  end: 10\n"
           "  fps: 25\n"
           "render:\n"
           "  mode: eulerian\n"
           "  width: 640\n"
           "  height: 360\n"
           "  camera:\n"
           "    position: [-60, -60, 35]\n"
           "    look_at: [0, 0, 0]\n"
           "output:\n"
           "  frames_dir: frames\n"
           "  bundle: bundle\n";
    if (!corridor.empty()) {
      std::ofstream net(corridor);
      net << sumoviz::synthetic::corridor_network();
    }
    std::cout << "scenario written to " << dir.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "sumoviz_synth: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
