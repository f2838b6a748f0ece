#pragma once

#include <nlohmann/json.hpp>

namespace factdeck {

/// JSON Schemas (draft 2020-12) of the service's request and response bodies.
inline const nlohmann::json& api_schemas() {
    static const nlohmann::json schemas = nlohmann::json::parse(R"JSON({
  "error": {
    "type": "object",
    "required": ["error"],
    "properties": {
      "error": {
        "type": "object",
        "required": ["code", "message"],
        "properties": {"code": {"type": "string"}, "message": {"type": "string"}}
      }
    }
  },
  "session_created": {
    "type": "object",
    "required": ["session_id", "revision"],
    "properties": {"session_id": {"type": "string"}, "revision": {"type": "integer", "minimum": 0}}
  },
  "session_create_request": {
    "type": "object",
    "properties": {"config": {"type": "object"}, "include_subspace": {"type": "boolean"}}
  },
  "dataset_created": {
    "type": "object",
    "required": ["dataset_id", "columns", "row_count", "revision"],
    "properties": {
      "dataset_id": {"type": "string"},
      "row_count": {"type": "integer", "minimum": 0},
      "revision": {"type": "integer"},
      "columns": {
        "type": "array",
        "items": {
          "type": "object",
          "required": ["name", "kind"],
          "properties": {
            "name": {"type": "string"},
            "kind": {"enum": ["nominal", "temporal", "quantitative"]}
          }
        }
      }
    }
  },
  "chart_request": {
    "type": "object",
    "required": ["mark", "encoding"],
    "properties": {
      "id": {"type": "string"},
      "dataset": {"type": "string"},
      "mark": {"oneOf": [{"type": "string"}, {"type": "object", "required": ["type"]}]},
      "encoding": {"type": "object"},
      "transform": {"type": ["object", "array"]}
    }
  },
  "illustrated_fact": {
    "type": "object",
    "required": ["fact", "description", "embellished_spec", "user_edited_description"],
    "properties": {
      "description": {"type": "string"},
      "user_edited_description": {"type": "boolean"},
      "fact": {
        "type": "object",
        "required": ["id", "fact_type", "focus", "measure", "dimension", "subspace", "parameters", "score", "origin", "chart_id"],
        "properties": {
          "id": {"type": "string"},
          "fact_type": {"enum": ["majority", "extreme", "outlier", "turning_point", "difference", "trend"]},
          "focus": {"type": "array", "items": {"type": "string"}},
          "origin": {"enum": ["mined", "user"]},
          "chart_id": {"type": "string"},
          "score": {
            "type": "object",
            "required": ["significance", "impact_f", "suitability", "total"]
          }
        }
      },
      "embellished_spec": {
        "type": "object",
        "required": ["id", "mark", "encoding", "annotations"],
        "properties": {
          "annotations": {
            "type": "array",
            "items": {
              "type": "object",
              "required": ["kind", "targets", "style"],
              "properties": {"kind": {"enum": ["point_highlight", "pair_link_with_arrows", "trend_line"]}}
            }
          }
        }
      }
    }
  },
  "chart_facts": {
    "type": "object",
    "required": ["chart_id", "chart", "facts", "revision"],
    "properties": {
      "chart_id": {"type": "string"},
      "chart": {"type": "object"},
      "facts": {"type": "array", "items": {"$ref": "#/illustrated_fact"}},
      "revision": {"type": "integer"}
    }
  },
  "fact_patch": {
    "type": "object",
    "minProperties": 1,
    "additionalProperties": false,
    "properties": {
      "fact_type": {"type": "string"},
      "description": {"type": "string"},
      "focus": {"oneOf": [{"type": "string"}, {"type": "array", "items": {"type": "string"}}]}
    }
  },
  "custom_fact": {
    "type": "object",
    "required": ["chart", "fact_type"],
    "properties": {
      "chart": {"type": "string"},
      "fact_type": {"type": "string"},
      "focus": {"oneOf": [{"type": "string"}, {"type": "array", "items": {"type": "string"}}]},
      "description": {"type": "string"}
    }
  },
  "fact_response": {
    "type": "object",
    "required": ["fact", "revision"],
    "properties": {"fact": {"$ref": "#/illustrated_fact"}, "revision": {"type": "integer"}}
  },
  "move": {
    "type": "object",
    "required": ["op"],
    "properties": {
      "op": {"enum": ["move_fact", "split", "move_slide", "merge"]},
      "fact": {"type": "string"},
      "slide": {"oneOf": [{"type": "string"}, {"type": "null"}, {"type": "object", "required": ["of_fact"]}]},
      "position": {"type": "integer", "minimum": 0},
      "source": {"oneOf": [{"type": "string"}, {"type": "object", "required": ["of_fact"]}]},
      "target": {"oneOf": [{"type": "string"}, {"type": "object", "required": ["of_fact"]}]}
    }
  },
  "title_patch": {
    "type": "object",
    "required": ["title"],
    "properties": {"title": {"type": "string"}}
  },
  "story_outline": {
    "type": "object",
    "required": ["revision", "fact_count", "slides"],
    "properties": {
      "revision": {"type": "integer"},
      "fact_count": {"type": "integer", "minimum": 0},
      "slides": {
        "type": "array",
        "items": {
          "type": "object",
          "required": ["id", "title", "title_user_edited", "pinned", "facts"],
          "properties": {
            "id": {"type": "string"},
            "title": {"type": "string"},
            "title_user_edited": {"type": "boolean"},
            "pinned": {"type": "boolean"},
            "facts": {
              "type": "array",
              "minItems": 1,
              "maxItems": 3,
              "items": {
                "type": "object",
                "required": ["id", "chart_id", "glyph", "fact_type", "description"],
                "properties": {
                  "glyph": {"enum": ["bar", "line", "area", "point", "arc"]},
                  "fact_type": {"type": "string"},
                  "description": {"type": "string"}
                }
              }
            }
          }
        }
      }
    }
  },
  "deck": {
    "type": "object",
    "required": ["schema_version", "metadata", "slides"],
    "properties": {
      "schema_version": {"const": 1},
      "metadata": {
        "type": "object",
        "required": ["dataset_id", "generated_at", "config_digest"]
      },
      "slides": {
        "type": "array",
        "items": {
          "type": "object",
          "required": ["id", "title", "layout", "blocks"],
          "properties": {
            "layout": {"enum": ["progressive_same_chart", "side_by_side"]},
            "encoding_intro": {"type": "string"},
            "blocks": {
              "type": "array",
              "items": {
                "type": "object",
                "required": ["fact_id", "chart_id", "fact_type", "description", "emphasis", "embellished_spec", "chart"]
              }
            }
          }
        }
      }
    }
  }
})JSON");
    return schemas;
}

} // namespace factdeck
