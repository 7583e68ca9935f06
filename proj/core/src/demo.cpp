#include "hlsforge/demo.hpp"

#include <algorithm>

#include "hlsforge/core.hpp"
#include "hlsforge/error.hpp"
#include "hlsforge/fsutil.hpp"

namespace hlsforge {

namespace {

MockManifest manifest(long long lut, long long ff, std::vector<LoopSpec> loops, std::vector<ArraySpec> arrays) {
  MockManifest m;
  m.base_lut = lut;
  m.base_ff = ff;
  m.loops = std::move(loops);
  m.arrays = std::move(arrays);
  return m;
}

std::string unroll_pipeline_group(const std::string& top, const std::string& lines, int n_lines) {
  return "loop_opt," + std::to_string(n_lines) + ",2\n" + lines + "set_directive_unroll -factor [factor] " + top +
         "/[name]\nset_directive_pipeline " + top + "/[name]\n";
}

std::string unroll_group(const std::string& top, const std::string& lines, int n_lines) {
  return "loop_opt," + std::to_string(n_lines) + ",1\n" + lines + "set_directive_unroll -factor [factor] " + top +
         "/[name]\n";
}

std::string partition_group(const std::string& top, const std::string& lines, int n_lines) {
  return "array_opt," + std::to_string(n_lines) + ",1\n" + lines +
         "set_directive_array_partition -type [type] -factor [factor] " + top + "/[name]\n";
}

std::vector<DemoKernel> build_kernels() {
  std::vector<DemoKernel> k;
  k.push_back({"k2mm",
               manifest(1200, 900, {{"lp1", 16, 4, 1}, {"lp2", 32, 6, 2}, {"lp3", 32, 5, 1}}, {{"tmp", 4, 256}}),
               unroll_pipeline_group("k2mm",
                                     "0,lp2,pipeline,unroll,[1 2 4 8]\n"
                                     "1,lp3,pipeline,unroll,[1 2 4 8]\n"
                                     "2,lp3,,unroll,[1 2 4 8]\n",
                                     3)});
  k.push_back({"atax", manifest(900, 700, {{"lp1", 24, 5, 1}, {"lp2", 24, 5, 1}}, {{"buf", 4, 576}}),
               unroll_pipeline_group("atax",
                                     "0,lp1,,unroll,[1 2 4]\n"
                                     "1,lp2,pipeline,unroll,[1 2 4]\n",
                                     2) +
                   partition_group("atax", "0,buf,,array_partition,[cyclic-2 cyclic-4]\n", 1)});
  k.push_back({"gemm", manifest(2400, 1800, {{"lp1", 32, 8, 2}, {"lp2", 64, 7, 2}}, {{"acc", 4, 1024}}),
               unroll_pipeline_group("gemm",
                                     "0,lp1,,unroll,[1 2 4 8]\n"
                                     "1,lp2,pipeline,unroll,[1 2 4]\n"
                                     "2,lp2,,unroll,[1 2 4]\n",
                                     3)});
  k.push_back({"bicg", manifest(800, 650, {{"lp1", 20, 4, 1}, {"lp2", 20, 4, 1}}, {{"s", 4, 400}}),
               unroll_group("bicg",
                            "0,lp1,,unroll,[1 2 4]\n"
                            "1,lp2,,unroll,[1 2 4]\n",
                            2)});
  k.push_back({"mvt",
               manifest(1000, 800, {{"lp1", 30, 5, 1}, {"lp2", 30, 5, 1}}, {{"x1", 4, 900}, {"x2", 4, 900}}),
               unroll_pipeline_group("mvt",
                                     "0,lp1,pipeline,unroll,[1 2]\n"
                                     "1,lp2,pipeline,unroll,[1 2]\n",
                                     2) +
                   partition_group("mvt",
                                   "0,x1,,array_partition,[cyclic-2 block-2]\n"
                                   "1,x2,,array_partition,[cyclic-2 block-2]\n",
                                   2)});
  k.push_back({"syrk", manifest(1500, 1100, {{"lp1", 32, 6, 2}, {"lp2", 32, 4, 1}}, {{"c", 4, 1024}}),
               unroll_group("syrk",
                            "0,lp1,,unroll,[1 2 4 8 16]\n"
                            "1,lp2,,unroll,[1 2 4 8]\n",
                            2)});
  k.push_back({"gesummv", manifest(1100, 850, {{"lp1", 28, 6, 2}, {"lp2", 28, 3, 0}}, {{"y", 4, 784}}),
               unroll_pipeline_group("gesummv",
                                     "0,lp1,pipeline,unroll,[1 2 4]\n"
                                     "1,lp1,,unroll,[1 2 4]\n"
                                     "2,lp2,,unroll,[1 2]\n",
                                     3)});
  k.push_back({"fir", manifest(400, 350, {{"tap", 16, 4, 1}}, {{"shift_reg", 4, 16}}),
               unroll_pipeline_group("fir", "0,tap,pipeline,unroll,[1 2 4 8]\n", 1)});
  k.push_back({"stencil2d", manifest(1300, 1000, {{"row", 32, 9, 0}, {"col", 32, 9, 3}}, {{"win", 4, 1024}}),
               unroll_pipeline_group("stencil2d",
                                     "0,row,,unroll,[1 2]\n"
                                     "1,col,pipeline,unroll,[1 2 4]\n",
                                     2) +
                   partition_group("stencil2d", "0,win,,array_partition,[cyclic-2 cyclic-3 cyclic-9]\n", 1)});
  k.push_back({"spmv", manifest(950, 720, {{"row", 40, 3, 0}, {"nz", 48, 5, 1}}, {{"val", 4, 2048}}),
               unroll_pipeline_group("spmv",
                                     "0,row,,unroll,[1 2 4]\n"
                                     "1,nz,pipeline,unroll,[1 2 4 8]\n",
                                     2)});
  return k;
}

std::string hls_script(const std::string& top) {
  return "open_project -reset hls_prj\n"
         "set_top " +
         top +
         "\n"
         "add_files kernel.cpp\n"
         "open_solution -reset solution1\n"
         "set_part {xcu50-fsvh2104-2-e}\n"
         "create_clock -period 10\n"
         "source opt.tcl\n"
         "csynth_design\n"
         "exit\n";
}

std::string ip_export_script() {
  return "open_project hls_prj\n"
         "open_solution solution1\n"
         "export_design -flow impl -rtl verilog -format ip_catalog\n"
         "exit\n";
}

}  // namespace

const std::vector<DemoKernel>& demo_kernels() {
  static const std::vector<DemoKernel> kernels = build_kernels();
  return kernels;
}

std::string demo_kernel_source(const DemoKernel& kernel) {
  const auto& m = kernel.manifest;
  const long long io_depth = m.arrays.empty() ? 64 : m.arrays.front().depth;
  std::string s = "#include <cstdint>\n\n";
  s += "void " + kernel.name + "(const float in[" + std::to_string(io_depth) + "], float out[" +
       std::to_string(io_depth) + "]) {\n";
  for (const auto& a : m.arrays) {
    s += "  // HLSFORGE_LABEL: " + a.label + "\n";
    s += "  float " + a.label + "[" + std::to_string(a.depth) + "];\n";
  }
  s += "  float acc = 0.0f;\n";
  for (const auto& l : m.loops) {
    const std::string mem = m.arrays.empty() ? "in" : m.arrays.front().label;
    s += "  // HLSFORGE_LABEL: " + l.label + "\n";
    s += "  " + l.label + ": for (int i = 0; i < " + std::to_string(l.trip_count) + "; ++i) {\n";
    s += "    const int k = i % " + std::to_string(io_depth) + ";\n";
    if (l.mult_ops > 0) {
      s += "    acc += in[k] * " + mem + "[k];\n";
    } else {
      s += "    acc += in[k] + " + mem + "[k];\n";
    }
    s += "    " + mem + "[k] = acc;\n";
    s += "  }\n";
  }
  s += "  for (int i = 0; i < " + std::to_string(io_depth) + "; ++i) out[i] = acc + in[i];\n";
  s += "}\n";
  return s;
}

std::size_t write_demo_dataset(const std::filesystem::path& dir, const std::vector<std::string>& names) {
  const auto& kernels = demo_kernels();
  for (const auto& n : names) {
    if (std::none_of(kernels.begin(), kernels.end(), [&](const auto& k) { return k.name == n; })) {
      throw Error(ErrorCode::InvalidArgument, "unknown demo kernel '" + n + "'");
    }
  }
  std::size_t written = 0;
  for (const auto& k : kernels) {
    if (!names.empty() && std::find(names.begin(), names.end(), k.name) == names.end()) continue;
    const auto d = dir / k.name;
    std::error_code ec;
    std::filesystem::create_directories(d, ec);
    if (ec) throw Error(ErrorCode::IOError, "cannot create " + d.string() + ": " + ec.message());
    write_text_file(d / "kernel.cpp", demo_kernel_source(k));
    write_text_file(d / kOptTemplateFile, k.opt_template);
    write_text_file(d / "dataset_hls.tcl", hls_script(k.name));
    write_text_file(d / "dataset_hls_ip_export.tcl", ip_export_script());
    write_text_file(d / kMockManifestFile, mock_manifest_json(k.manifest));
    ++written;
  }
  return written;
}

}  // namespace hlsforge
