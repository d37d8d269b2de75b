#include "polyped/trajectory.h"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace polyped {

void Trajectory::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("trajectory: cannot write " + path);

  out << "# polyped trajectory v1; terrain=" << to_string(terrain)
      << "; segments=" << n_segments << "\n";
  out << "# segment rows: t,seg,yaw,roll_L,roll_R,footL_x,footL_y,footL_z,"
         "footR_x,footR_y,footR_z,yaw_state,legL_state,legR_state,"
         "contact_L,contact_R,slip_L,slip_R\n";
  out << "# body rows: t,OG_x,OG_y,OG_z,height,pitch,roll\n";

  char buf[512];
  for (const auto& rec : records) {
    for (size_t k = 0; k < rec.segments.size(); ++k) {
      const SegmentRecord& s = rec.segments[k];
      std::snprintf(buf, sizeof(buf),
                    "%.17g,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                    "%s,%s,%s,%d,%d,%d,%d\n",
                    rec.t, k, s.yaw, s.roll_left, s.roll_right, s.foot_left.x(),
                    s.foot_left.y(), s.foot_left.z(), s.foot_right.x(), s.foot_right.y(),
                    s.foot_right.z(), to_string(s.yaw_state).c_str(),
                    to_string(s.leg_left), to_string(s.leg_right), s.contact_left ? 1 : 0,
                    s.contact_right ? 1 : 0, s.slip_left ? 1 : 0, s.slip_right ? 1 : 0);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", rec.t,
                  rec.body.origin.x(), rec.body.origin.y(), rec.body.origin.z(),
                  rec.body.height, rec.body.pitch, rec.body.roll);
    out << buf;
  }
}

}  // namespace polyped
