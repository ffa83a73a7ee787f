#include "crbm/triplets.hpp"

namespace crbm::cohort {

std::vector<Triplet> build_triplets(const std::vector<SubjectRecord>& records,
                                    const CohortSchema& schema,
                                    const Normalizers& norms,
                                    const BlockLayout& layout) {
  const int step = schema.visit_interval_months;
  const int lag = layout.lag();
  const int upb = layout.units_per_time_block();
  const int n_vis = layout.n_visible();
  const MaskedRow empty_row(schema.n_variables());
  const int indicator_var = schema.baseline_indicator_index();
  const int indicator_off =
      indicator_var >= 0 ? layout.time_unit_offset(indicator_var) : -1;

  std::vector<Triplet> out;
  for (const auto& rec : records) {
    const int last = rec.duration_months();
    for (int t = 0; t + lag * step <= last; t += step) {
      Triplet tr;
      tr.visible.setZero(n_vis);
      tr.mask.setZero(n_vis);
      tr.subject_id = rec.subject_id;
      tr.base_month = t;
      for (int j = 0; j <= lag; ++j) {
        const int month = t + j * step;
        const auto it = rec.visits.find(month);
        const MaskedRow& row = (it == rec.visits.end()) ? empty_row : it->second;
        const int at = layout.time_block_start(j);
        encode_time_row(row, schema, norms, layout, tr.visible.data() + at,
                        tr.mask.data() + at);
        if (indicator_off >= 0) {
          // The baseline indicator is known a priori for every visit.
          tr.visible[at + indicator_off] = (month == 0) ? 1.0 : 0.0;
          tr.mask[at + indicator_off] = 1.0;
        }
      }
      encode_static_row(rec.statics, schema, norms, layout,
                        tr.visible.data() + layout.static_block_start(),
                        tr.mask.data() + layout.static_block_start());
      // Drop windows where the subject effectively missed the last visit.
      // The forced indicator does not count as longitudinal data.
      const int last_block = layout.time_block_start(lag);
      double observed = tr.mask.segment(last_block, upb).sum();
      if (indicator_off >= 0) observed -= tr.mask[last_block + indicator_off];
      if (observed > 0.0) {
        out.push_back(std::move(tr));
      }
    }
  }
  return out;
}

}  // namespace crbm::cohort
