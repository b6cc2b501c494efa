#include "pes/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace pes {

namespace {

struct Panel {
    double x = 0, y = 0, w = 0, h = 0;           // pixel frame
    double lo_x = 0, hi_x = 1, lo_y = 0, hi_y = 1;  // data window

    [[nodiscard]] double px(double v) const { return x + (v - lo_x) / (hi_x - lo_x) * w; }
    [[nodiscard]] double py(double v) const { return y + h - (v - lo_y) / (hi_y - lo_y) * h; }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

void expand(double& lo, double& hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.06 * (hi - lo);
    lo -= pad;
    hi += pad;
}

void draw_frame(std::ostringstream& s, const Panel& p, const std::string& xlabel,
                const std::string& ylabel) {
    s << "<rect x='" << p.x << "' y='" << p.y << "' width='" << p.w << "' height='" << p.h
      << "' fill='white' stroke='black' stroke-width='1'/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double vx = p.lo_x + (p.hi_x - p.lo_x) * k / 4.0;
        const double vy = p.lo_y + (p.hi_y - p.lo_y) * k / 4.0;
        s << "<line x1='" << p.px(vx) << "' y1='" << p.y + p.h << "' x2='" << p.px(vx)
          << "' y2='" << p.y + p.h + 4 << "' stroke='black'/>\n"
          << "<text x='" << p.px(vx) << "' y='" << p.y + p.h + 16
          << "' font-size='10' text-anchor='middle'>" << num(vx) << "</text>\n"
          << "<line x1='" << p.x - 4 << "' y1='" << p.py(vy) << "' x2='" << p.x << "' y2='"
          << p.py(vy) << "' stroke='black'/>\n"
          << "<text x='" << p.x - 6 << "' y='" << p.py(vy) + 3
          << "' font-size='10' text-anchor='end'>" << num(vy) << "</text>\n";
    }
    s << "<text x='" << p.x + p.w / 2 << "' y='" << p.y + p.h + 32
      << "' font-size='11' text-anchor='middle'>" << xlabel << "</text>\n"
      << "<text x='" << p.x - 44 << "' y='" << p.y + p.h / 2
      << "' font-size='11' text-anchor='middle' transform='rotate(-90 " << p.x - 44 << " "
      << p.y + p.h / 2 << ")'>" << ylabel << "</text>\n";
}

void draw_polyline(std::ostringstream& s, const Panel& p, const std::vector<double>& xs,
                   const std::vector<double>& ys, const std::string& color) {
    s << "<polyline fill='none' stroke='" << color << "' stroke-width='1.2' points='";
    const std::size_t stride = std::max<std::size_t>(1, xs.size() / 4000);
    for (std::size_t k = 0; k < xs.size(); k += stride) {
        s << num(p.px(xs[k])) << ',' << num(p.py(ys[k])) << ' ';
    }
    if ((xs.size() - 1) % stride != 0) {
        s << num(p.px(xs.back())) << ',' << num(p.py(ys.back()));
    }
    s << "'/>\n";
}

}  // namespace

void write_trajectory_svg(const std::string& path, const Trajectory& traj,
                          const std::optional<Vec>& y_star, const std::string& title) {
    require(!traj.states.empty(), "write_trajectory_svg: empty trajectory");
    const int n = static_cast<int>(traj.states.front().size());

    std::vector<double> a(traj.size()), b(traj.size()), t(traj.size()), c(traj.size());
    const int third = n >= 3 ? 2 : n - 1;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        a[k] = traj.states[k][0];
        b[k] = n >= 2 ? traj.states[k][1] : traj.times[k];
        t[k] = traj.times[k];
        c[k] = traj.states[k][third];
    }

    const double width = 480, height = 640;
    Panel top{70, 40, width - 110, 240};
    Panel bot{70, 360, width - 110, 220};

    top.lo_x = *std::min_element(a.begin(), a.end());
    top.hi_x = *std::max_element(a.begin(), a.end());
    top.lo_y = *std::min_element(b.begin(), b.end());
    top.hi_y = *std::max_element(b.begin(), b.end());
    if (y_star && y_star->size() >= 2) {
        top.lo_x = std::min(top.lo_x, (*y_star)[0]);
        top.hi_x = std::max(top.hi_x, (*y_star)[0]);
        top.lo_y = std::min(top.lo_y, (*y_star)[1]);
        top.hi_y = std::max(top.hi_y, (*y_star)[1]);
    }
    expand(top.lo_x, top.hi_x);
    expand(top.lo_y, top.hi_y);
    bot.lo_x = t.front();
    bot.hi_x = t.back();
    bot.lo_y = *std::min_element(c.begin(), c.end());
    bot.hi_y = *std::max_element(c.begin(), c.end());
    expand(bot.lo_x, bot.hi_x);
    expand(bot.lo_y, bot.hi_y);

    std::ostringstream s;
    s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "' viewBox='0 0 " << width << ' ' << height << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << width / 2 << "' y='22' font-size='13' text-anchor='middle'>" << title
      << "</text>\n";

    draw_frame(s, top, "x1", n >= 2 ? "x2" : "t");
    draw_polyline(s, top, a, b, "#1f6fb2");
    s << "<circle cx='" << top.px(a.front()) << "' cy='" << top.py(b.front())
      << "' r='3' fill='#1f6fb2'/>\n";
    if (y_star && y_star->size() >= 2) {
        s << "<circle cx='" << top.px((*y_star)[0]) << "' cy='" << top.py((*y_star)[1])
          << "' r='4' fill='none' stroke='#c0392b' stroke-width='1.5'/>\n"
          << "<line x1='" << top.px((*y_star)[0]) - 6 << "' y1='" << top.py((*y_star)[1])
          << "' x2='" << top.px((*y_star)[0]) + 6 << "' y2='" << top.py((*y_star)[1])
          << "' stroke='#c0392b' stroke-width='1'/>\n";
    }

    draw_frame(s, bot, "t", "x" + std::to_string(third + 1));
    draw_polyline(s, bot, t, c, "#1f6fb2");

    s << "</svg>\n";

    std::ofstream out(path);
    require(out.good(), "write_trajectory_svg: cannot open " + path);
    out << s.str();
}

}  // namespace pes
