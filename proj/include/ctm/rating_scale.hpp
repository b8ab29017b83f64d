#ifndef CTM_RATING_SCALE_HPP
#define CTM_RATING_SCALE_HPP

#include <optional>
#include <string>
#include <vector>

namespace ctm {

/// Ordered list of rating-class labels. The last label is the absorbing
/// default state; all preceding labels are transient classes.
class RatingScale {
  public:
    /// Requires at least two labels, all unique and non-empty.
    explicit RatingScale(std::vector<std::string> labels);

    int size() const { return static_cast<int>(labels_.size()); } // K
    int transient_count() const { return size() - 1; }            // K-1

    const std::string& label(int i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& default_label() const { return labels_.back(); }

    /// Index of a label among the transient classes, or nullopt if the
    /// label is unknown or names the default state.
    std::optional<int> transient_index(const std::string& label) const;

    bool operator==(const RatingScale& other) const { return labels_ == other.labels_; }

  private:
    std::vector<std::string> labels_;
};

} // namespace ctm

#endif
