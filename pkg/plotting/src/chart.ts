import * as echarts from "echarts";

import type { Aggregation } from "./aggregate.js";

export const DEFAULT_Y_LABEL = "MMF rate (bits/ch. use)";

const MARKERS = ["circle", "rect", "triangle", "diamond", "pin", "arrow"];

export interface ChartStyle {
  title?: string;
  yLabel?: string;
  width?: number;
  height?: number;
}

export function buildChartOption(agg: Aggregation, style: ChartStyle = {}): echarts.EChartsOption {
  const option: echarts.EChartsOption = {
    animation: false,
    title: style.title ? { text: style.title, left: "center" } : undefined,
    legend: {
      data: agg.series.map((s) => s.strategy),
      bottom: agg.excludedRows > 0 ? 24 : 0,
    },
    grid: { left: 60, right: 20, top: style.title ? 48 : 20, bottom: agg.excludedRows > 0 ? 84 : 60 },
    xAxis: {
      type: "value",
      name: "SNR (dB)",
      nameLocation: "middle",
      nameGap: 28,
    },
    yAxis: {
      type: "value",
      name: style.yLabel ?? DEFAULT_Y_LABEL,
      nameLocation: "middle",
      nameGap: 40,
    },
    series: agg.series.map((s, index) => ({
      name: s.strategy,
      type: "line",
      symbol: MARKERS[index % MARKERS.length],
      symbolSize: 8,
      data: s.points.map((p) => [p.snrDb, p.meanRate]),
    })),
  };
  if (agg.excludedRows > 0) {
    option.graphic = [
      {
        type: "text",
        left: 8,
        bottom: 4,
        style: {
          text: `note: ${agg.excludedRows} unconverged row(s) excluded from the averages`,
          fontSize: 11,
          fill: "#666",
        },
      },
    ];
  }
  return option;
}

/** Render the aggregation to an SVG string via echarts server-side mode. */
export function renderSvg(agg: Aggregation, style: ChartStyle = {}): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: style.width ?? 800,
    height: style.height ?? 560,
  });
  try {
    chart.setOption(buildChartOption(agg, style));
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}
