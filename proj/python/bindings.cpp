#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pyroclass/dataset.hpp"
#include "pyroclass/kernels.hpp"
#include "pyroclass/logreg.hpp"
#include "pyroclass/metrics.hpp"
#include "pyroclass/model_select.hpp"
#include "pyroclass/preprocess.hpp"
#include "pyroclass/svm.hpp"

namespace py = pybind11;
using namespace pyroclass;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using LabelArray = py::array_t<std::int8_t, py::array::c_style | py::array::forcecast>;
using ByteArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const DoubleArray& a) {
  if (a.ndim() != 2)
    throw DimensionError("expected a 2-D array, got " + std::to_string(a.ndim()) + "-D");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return Matrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

py::array_t<double> from_matrix(const Matrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

std::span<const double> as_span(const DoubleArray& a) {
  return {a.data(), static_cast<std::size_t>(a.size())};
}

std::vector<Label> to_labels(const LabelArray& a) {
  return {a.data(), a.data() + a.size()};
}

LabeledDataset to_dataset(const DoubleArray& X, const LabelArray& y) {
  LabeledDataset ds;
  ds.features = to_matrix(X);
  ds.labels = to_labels(y);
  if (ds.labels.size() != ds.features.rows())
    throw DimensionError("X has " + std::to_string(ds.features.rows()) + " rows but y has " +
                         std::to_string(ds.labels.size()) + " labels");
  return ds;
}

RgbImage to_image(const ByteArray& a) {
  if (a.ndim() != 3 || a.shape(2) != 3)
    throw DimensionError("expected an (height, width, 3) uint8 array");
  const auto h = static_cast<std::size_t>(a.shape(0));
  const auto w = static_cast<std::size_t>(a.shape(1));
  std::vector<Rgb> px(w * h);
  const auto* p = a.data();
  for (std::size_t i = 0; i < px.size(); ++i)
    px[i] = {p[3 * i], p[3 * i + 1], p[3 * i + 2]};
  return RgbImage(w, h, std::move(px));
}

py::array_t<std::uint8_t> from_image(const RgbImage& img) {
  py::array_t<std::uint8_t> out({img.height(), img.width(), std::size_t{3}});
  auto* p = out.mutable_data();
  for (const auto& px : img.pixels()) {
    *p++ = px.r;
    *p++ = px.g;
    *p++ = px.b;
  }
  return out;
}

py::array_t<double> decisions(const DoubleArray& X, const std::function<double(std::span<const double>)>& f) {
  const Matrix m = to_matrix(X);
  py::array_t<double> out(m.rows());
  auto* p = out.mutable_data();
  for (std::size_t i = 0; i < m.rows(); ++i)
    p[i] = f(m.row(i));
  return out;
}

py::array_t<std::int8_t> sign_of(const py::array_t<double>& scores) {
  py::array_t<std::int8_t> out(scores.size());
  for (py::ssize_t i = 0; i < scores.size(); ++i)
    out.mutable_data()[i] = scores.data()[i] >= 0.0 ? 1 : -1;
  return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "pyroclass native core";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  auto data_error = py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", data_error.ptr());
  py::register_exception<SingleClassError>(m, "SingleClassError", data_error.ptr());

  // kernels
  py::class_<LinearKernel>(m, "LinearKernel").def(py::init<>());
  py::class_<PolynomialKernel>(m, "PolynomialKernel")
      .def(py::init([](double c, int d) { return PolynomialKernel{c, d}; }), py::arg("c") = 1.0, py::arg("d") = 2)
      .def_readwrite("c", &PolynomialKernel::c)
      .def_readwrite("d", &PolynomialKernel::d);
  py::class_<GaussianKernel>(m, "GaussianKernel")
      .def(py::init([](double gamma) { return GaussianKernel{gamma}; }), py::arg("gamma") = 1.0)
      .def_static("from_sigma", &GaussianKernel::from_sigma)
      .def_readwrite("gamma", &GaussianKernel::gamma);
  py::class_<SigmoidKernel>(m, "SigmoidKernel")
      .def(py::init([](double alpha, double beta) { return SigmoidKernel{alpha, beta}; }), py::arg("alpha") = 1.0,
           py::arg("beta") = 0.0)
      .def_readwrite("alpha", &SigmoidKernel::alpha)
      .def_readwrite("beta", &SigmoidKernel::beta);

  m.def("describe_kernel", [](const KernelSpec& k) { return describe(k); });
  m.def("kernel_eval", [](const KernelSpec& k, const DoubleArray& x, const DoubleArray& z) {
    return eval(k, as_span(x), as_span(z));
  });
  m.def("gram", [](const KernelSpec& k, const DoubleArray& X, unsigned threads) {
    validate(k);
    return from_matrix(gram(k, to_matrix(X), threads));
  }, py::arg("kernel"), py::arg("X"), py::arg("threads") = 1);

  // svm
  py::class_<SvmConfig>(m, "SvmConfig")
      .def(py::init([](const KernelSpec& kernel, double C, double kkt_tol) {
             SvmConfig cfg;
             cfg.kernel = kernel;
             cfg.C = C;
             cfg.kkt_tol = kkt_tol;
             return cfg;
           }),
           py::arg("kernel") = KernelSpec{GaussianKernel{}}, py::arg("C") = 1.0, py::arg("kkt_tol") = 1e-3)
      .def_readwrite("kernel", &SvmConfig::kernel)
      .def_readwrite("C", &SvmConfig::C)
      .def_readwrite("kkt_tol", &SvmConfig::kkt_tol)
      .def_readwrite("eps", &SvmConfig::eps)
      .def_readwrite("max_passes", &SvmConfig::max_passes)
      .def_readwrite("max_iter", &SvmConfig::max_iter)
      .def_readwrite("cache_budget_bytes", &SvmConfig::cache_budget_bytes)
      .def_readwrite("threads", &SvmConfig::threads);
  py::class_<TrainingMeta>(m, "TrainingMeta")
      .def_readonly("iterations", &TrainingMeta::iterations)
      .def_readonly("objective", &TrainingMeta::objective)
      .def_readonly("kkt_gap", &TrainingMeta::kkt_gap)
      .def_readonly("converged", &TrainingMeta::converged)
      .def_readonly("full_gram", &TrainingMeta::full_gram);
  py::class_<SvmModel>(m, "SvmModel")
      .def("decision_function", [](const SvmModel& s, const DoubleArray& X) {
        return decisions(X, [&](auto x) { return s.decision(x); });
      })
      .def("predict", [](const SvmModel& s, const DoubleArray& X) {
        return sign_of(decisions(X, [&](auto x) { return s.decision(x); }));
      })
      .def_property_readonly("support_vectors", [](const SvmModel& s) { return from_matrix(s.support_vectors()); })
      .def_property_readonly("dual_coefs", &SvmModel::dual_coefs)
      .def_property_readonly("bias", &SvmModel::bias)
      .def_property_readonly("kernel", &SvmModel::kernel)
      .def_property_readonly("meta", &SvmModel::meta)
      .def("save", [](const SvmModel& s, const std::filesystem::path& p) { save_model(s, p); });
  m.def("train_svm", [](const DoubleArray& X, const LabelArray& y, const SvmConfig& cfg) {
    const auto ds = to_dataset(X, y);
    py::gil_scoped_release release;
    return train_smo(ds, cfg);
  });
  m.def("load_svm_model", &load_svm_model);

  // logistic regression
  py::class_<LogRegConfig>(m, "LogRegConfig")
      .def(py::init([](double learning_rate, std::size_t iterations, double lambda) {
             return LogRegConfig{learning_rate, iterations, lambda};
           }),
           py::arg("learning_rate") = 0.1, py::arg("iterations") = 2000, py::arg("lambda_") = 1e-4)
      .def_readwrite("learning_rate", &LogRegConfig::learning_rate)
      .def_readwrite("iterations", &LogRegConfig::iterations)
      .def_readwrite("lambda_", &LogRegConfig::lambda);
  py::class_<LogRegModel>(m, "LogRegModel")
      .def_readonly("weights", &LogRegModel::weights)
      .def_readonly("bias", &LogRegModel::bias)
      .def("decision_function", [](const LogRegModel& l, const DoubleArray& X) {
        return decisions(X, [&](auto x) { return l.decision(x); });
      })
      .def("predict_proba", [](const LogRegModel& l, const DoubleArray& X) {
        return decisions(X, [&](auto x) { return l.predict_proba(x); });
      })
      .def("predict", [](const LogRegModel& l, const DoubleArray& X) {
        return decisions(X, [&](auto x) { return static_cast<double>(l.predict(x)); }).attr("astype")("int8");
      })
      .def("save", [](const LogRegModel& l, const std::filesystem::path& p) { save_model(l, p); });
  m.def("train_logreg", [](const DoubleArray& X, const LabelArray& y, const LogRegConfig& cfg) {
    const auto ds = to_dataset(X, y);
    py::gil_scoped_release release;
    return train_gd(ds, cfg);
  });
  m.def("load_logreg_model", &load_logreg_model);

  // metrics
  py::class_<ConfusionMatrix>(m, "ConfusionMatrix")
      .def_readonly("tp", &ConfusionMatrix::tp)
      .def_readonly("fp", &ConfusionMatrix::fp)
      .def_readonly("fn", &ConfusionMatrix::fn)
      .def_readonly("tn", &ConfusionMatrix::tn)
      .def("__str__", &ConfusionMatrix::to_string);
  m.def("confusion", [](const LabelArray& y, const LabelArray& p) { return confusion(to_labels(y), to_labels(p)); });
  m.def("accuracy", &accuracy);
  m.def("tpr", &tpr);
  m.def("fpr", &fpr);
  m.def("f1", &f1);
  m.def("roc_from_scores", [](const LabelArray& y, const DoubleArray& s) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : roc_from_scores(to_labels(y), as_span(s)).points)
      pts.emplace_back(p.fpr, p.tpr);
    return pts;
  });
  m.def("auc", [](const std::vector<std::pair<double, double>>& pts) {
    RocCurve c;
    for (const auto& [f, t] : pts)
      c.points.push_back({f, t});
    return auc(c);
  });

  // model selection
  m.def("kfold_split", [](std::size_t n, std::size_t k, std::uint64_t seed) { return kfold_split(n, k, seed).assignment; });
  m.def("kfold_split_stratified", [](const LabelArray& y, std::size_t k, std::uint64_t seed) {
    return kfold_split_stratified(to_labels(y), k, seed).assignment;
  });

  // images and datasets
  m.def("load_image", [](const std::filesystem::path& p) { return from_image(load_image(p)); });
  m.def("save_png", [](const ByteArray& a, const std::filesystem::path& p) { save_png(to_image(a), p); });
  m.def("resize_bilinear", [](const ByteArray& a, std::size_t w, std::size_t h) {
    return from_image(resize_bilinear(to_image(a), w, h));
  });
  m.def("flip_horizontal", [](const ByteArray& a) { return from_image(flip_horizontal(to_image(a))); });
  m.def("median_blur", [](const ByteArray& a, std::size_t window) {
    return from_image(median_blur(to_image(a), window));
  }, py::arg("image"), py::arg("window") = 3);
  m.def("load_dataset", [](const std::filesystem::path& p) {
    const auto ds = load_dataset(p);
    py::array_t<std::int8_t> y(ds.labels.size());
    std::copy(ds.labels.begin(), ds.labels.end(), y.mutable_data());
    return py::make_tuple(from_matrix(ds.features), y, ds.resolution);
  });
  m.def("save_dataset", [](const DoubleArray& X, const LabelArray& y, const std::filesystem::path& p,
                           std::uint32_t resolution) {
    auto ds = to_dataset(X, y);
    ds.resolution = resolution;
    ds.validate();
    save_dataset(ds, p);
  }, py::arg("X"), py::arg("y"), py::arg("path"), py::arg("resolution") = 0);

  m.attr("__version__") = PYROCLASS_VERSION;
}
