#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "crackmusic/commands.hpp"
#include "crackmusic/forward_asym.hpp"
#include "crackmusic/special_fn.hpp"

namespace py = pybind11;
using namespace crackmusic;

namespace {

py::array_t<double> map_values(const ImageMap& m) {
    py::array_t<double> out({m.grid.ny(), m.grid.nx()});
    std::copy(m.values.begin(), m.values.end(), out.mutable_data());
    return out;
}

py::array_t<double> direction_array(const DirectionSet& d) {
    py::array_t<double> out({d.size(), std::size_t{2}});
    auto v = out.mutable_unchecked<2>();
    for (std::size_t n = 0; n < d.size(); ++n) {
        const Point2 t = d.direction(n);
        v(n, 0) = t.x;
        v(n, 1) = t.y;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "MUSIC imaging of cracks with an unknown wavenumber";

    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<Point2>(m, "Point2")
        .def(py::init<>())
        .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
        .def(py::init([](const std::pair<double, double>& p) { return Point2{p.first, p.second}; }))
        .def_readwrite("x", &Point2::x)
        .def_readwrite("y", &Point2::y)
        .def("__iter__", [](const Point2& p) { return py::iter(py::make_tuple(p.x, p.y)); })
        .def("__eq__", [](const Point2& a, const Point2& b) { return a == b; })
        .def("__repr__", [](const Point2& p) { return "Point2(" + io::format_double(p.x) + ", " + io::format_double(p.y) + ")"; });
    py::implicitly_convertible<py::tuple, Point2>();

    py::enum_<DirectionMode>(m, "DirectionMode")
        .value("closed", DirectionMode::closed)
        .value("open", DirectionMode::open);

    py::class_<DirectionSet>(m, "DirectionSet")
        .def("__len__", &DirectionSet::size)
        .def_property_readonly("mode", &DirectionSet::mode)
        .def_property_readonly("angles", &DirectionSet::angles)
        .def_property_readonly("directions", &direction_array)
        .def_property_readonly("weights", &DirectionSet::quadrature_weights);
    m.def("make_directions", &make_directions, py::arg("count"), py::arg("mode") = DirectionMode::closed);

    m.def("bessel_j0", &bessel_j0, py::arg("x"));
    m.def("direction_average", &direction_average, py::arg("w"), py::arg("x"), py::arg("directions"));

    py::class_<SegmentCrack>(m, "SegmentCrack")
        .def(py::init<Point2, double, double>(), py::arg("center"), py::arg("half_length"), py::arg("angle") = 0.0)
        .def_readwrite("center", &SegmentCrack::center)
        .def_readwrite("half_length", &SegmentCrack::half_length)
        .def_readwrite("angle", &SegmentCrack::angle)
        .def("point", &SegmentCrack::point, py::arg("s"))
        .def("length", &SegmentCrack::length);
    py::class_<ParametricCrack>(m, "ParametricCrack")
        .def_static("from_points", &ParametricCrack::from_points, py::arg("points"))
        .def("point", &ParametricCrack::point, py::arg("s"))
        .def("arclength", &ParametricCrack::arclength)
        .def_property_readonly("points", &ParametricCrack::lobatto_points);

    py::class_<Scene>(m, "Scene")
        .def(py::init([](std::vector<Crack> cracks, double k) {
                 Scene s{std::move(cracks), k};
                 s.validate();
                 return s;
             }),
             py::arg("cracks"), py::arg("wavenumber"))
        .def_readwrite("cracks", &Scene::cracks)
        .def_readwrite("wavenumber", &Scene::wavenumber)
        .def("centers", &Scene::centers)
        .def("to_json", [](const Scene& s) { return io::scene_to_json(s).dump(); })
        .def_static("from_json", [](const std::string& text) { return io::scene_from_json(io::Json::parse(text)); });
    m.def("three_small_cracks", &scenarios::three_small_cracks, py::arg("h") = 0.05);
    m.def("extended_arc", &scenarios::extended_arc, py::arg("sample_count") = 65);

    py::class_<MsrMatrix>(m, "MsrMatrix")
        .def_readwrite("entries", &MsrMatrix::entries)
        .def_readonly("directions", &MsrMatrix::directions)
        .def_readonly("wavenumber", &MsrMatrix::wavenumber)
        .def_property_readonly("provenance", [](const MsrMatrix& k) { return to_string(k.provenance); })
        .def_readonly("snr_db", &MsrMatrix::snr_db)
        .def_readonly("seed", &MsrMatrix::seed)
        .def_readonly("reciprocity_audit", &MsrMatrix::reciprocity_audit)
        .def("__len__", &MsrMatrix::size);

    py::class_<BieOptions>(m, "BieOptions")
        .def(py::init<>())
        .def_readwrite("initial_nodes", &BieOptions::initial_nodes)
        .def_readwrite("max_nodes", &BieOptions::max_nodes)
        .def_readwrite("tolerance", &BieOptions::convergence_tol);
    m.def("assemble_msr", &assemble_msr, py::arg("scene"), py::arg("h"), py::arg("directions"));
    m.def("assemble_msr_bie", &assemble_msr_bie, py::arg("scene"), py::arg("directions"),
          py::arg("options") = BieOptions{}, py::call_guard<py::gil_scoped_release>());
    m.def("add_awgn", &add_awgn, py::arg("msr"), py::arg("snr_db"), py::arg("seed"));
    m.def("measured_snr_db", &measured_snr_db, py::arg("clean"), py::arg("noisy"));
    m.def("read_msr", &io::read_msr, py::arg("csv_path"));
    m.def("write_msr", &io::write_msr, py::arg("msr"), py::arg("csv_path"));

    py::class_<SignalDimMethod>(m, "SignalDimMethod")
        .def_static("parse", &SignalDimMethod::parse)
        .def("__str__", &SignalDimMethod::to_string);
    py::class_<SignalSpace>(m, "SignalSpace")
        .def_readonly("singular_values", &SignalSpace::singular_values)
        .def_readonly("left_vectors", &SignalSpace::left_vectors)
        .def_readonly("dim", &SignalSpace::dim)
        .def_readonly("ambiguous", &SignalSpace::ambiguous);
    m.def("svd_msr", &svd_msr, py::arg("msr"));
    m.def(
        "select_signal_dim",
        [](const SignalSpace& s, const std::string& method) { return select_signal_dim(s, SignalDimMethod::parse(method)); },
        py::arg("space"), py::arg("method"));
    m.def("noise_projector", &noise_projector, py::arg("space"));

    py::class_<ImageGrid>(m, "ImageGrid")
        .def(py::init([](double x0, double x1, double y0, double y1, double step) {
                 ImageGrid g{x0, x1, y0, y1, step};
                 g.validate();
                 return g;
             }),
             py::arg("x0") = -2.0, py::arg("x1") = 2.0, py::arg("y0") = -2.0, py::arg("y1") = 2.0,
             py::arg("step") = 0.01)
        .def_property_readonly("nx", &ImageGrid::nx)
        .def_property_readonly("ny", &ImageGrid::ny)
        .def_readonly("step", &ImageGrid::step);
    py::class_<ImageMap>(m, "ImageMap")
        .def_readonly("grid", &ImageMap::grid)
        .def_readonly("eta", &ImageMap::eta)
        .def_readonly("provenance", &ImageMap::provenance)
        .def_property_readonly("values", &map_values);
    py::class_<Peak>(m, "Peak")
        .def_readonly("location", &Peak::location)
        .def_readonly("value", &Peak::value);
    m.def("imaging_map", &imaging_map, py::arg("space"), py::arg("grid"), py::arg("eta"), py::arg("directions"),
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "find_peaks", [](const ImageMap& map, std::size_t count) { return find_peaks(map, count).peaks; },
        py::arg("map"), py::arg("count"));

    py::enum_<TheoryVariant>(m, "TheoryVariant")
        .value("squared", TheoryVariant::squared)
        .value("linear", TheoryVariant::linear);
    m.def(
        "theory_map",
        [](double k, double eta, std::vector<Point2> centers, const ImageGrid& grid, TheoryVariant variant) {
            return theory_map(TheoryParams{k, eta, std::move(centers), variant}, grid);
        },
        py::arg("wavenumber"), py::arg("eta"), py::arg("centers"), py::arg("grid"),
        py::arg("variant") = TheoryVariant::squared);

    m.def("estimate_k", &estimate_k, py::arg("peak"), py::arg("y"), py::arg("eta"));
    py::class_<CalibrationResult>(m, "CalibrationResult")
        .def_readonly("k_hat", &CalibrationResult::k_hat)
        .def_readonly("peak", &CalibrationResult::peak)
        .def_readonly("eta_used", &CalibrationResult::eta_used)
        .def_readonly("residual", &CalibrationResult::residual)
        .def_readonly("ambiguous", &CalibrationResult::ambiguous)
        .def_readonly("signal_dim", &CalibrationResult::signal_dim)
        .def_readonly("probe_map", &CalibrationResult::probe_map)
        .def_readonly("reimaged", &CalibrationResult::reimaged);
    m.def(
        "calibrate",
        [](const MsrMatrix& data, Point2 location, double eta, const ImageGrid& grid, const std::string& method) {
            CalibrationPlan plan;
            plan.location = location;
            plan.eta = eta;
            return calibrate_and_image(data, plan, grid, SignalDimMethod::parse(method));
        },
        py::arg("data"), py::arg("location"), py::arg("eta") = 20.0, py::arg("grid") = ImageGrid{},
        py::arg("method") = "log_gap");

    py::class_<RunConfig>(m, "RunConfig")
        .def_readonly("name", &RunConfig::name)
        .def_readonly("scene", &RunConfig::scene)
        .def_readwrite("output_dir", &RunConfig::output_dir)
        .def("to_json", [](const RunConfig& c) { return config_to_json(c).dump(); });
    m.def("load_config", &load_config, py::arg("path"));
    m.def("generate_msr", &generate_msr, py::arg("config"), py::call_guard<py::gil_scoped_release>());

    const auto files = [](const CommandResult& r) {
        std::vector<std::string> out;
        for (const auto& f : r.files) out.push_back(f.string());
        return out;
    };
    m.def("run_forward", [files](const RunConfig& c) { return files(cmd_forward(c)); }, py::arg("config"));
    m.def("run_image", [files](const RunConfig& c, const MsrMatrix& d) { return files(cmd_image(c, d)); },
          py::arg("config"), py::arg("data"));
    m.def("run_calibrate", [files](const RunConfig& c, const MsrMatrix& d) { return files(cmd_calibrate(c, d)); },
          py::arg("config"), py::arg("data"));
}
