#define M 24
#define N 24

void atax(const float A[M][N], const float x[N], float y[N]) {
  // HLSFORGE_LABEL: buf
  float buf[M];

  // HLSFORGE_LABEL: lp1
  lp1: for (int i = 0; i < M; i++) {
    float acc = 0.0f;
    for (int j = 0; j < N; j++) acc += A[i][j] * x[j];
    buf[i] = acc;
  }

  // HLSFORGE_LABEL: lp2
  lp2: for (int j = 0; j < N; j++) {
    float acc = 0.0f;
    for (int i = 0; i < M; i++) acc += A[i][j] * buf[i];
    y[j] = acc;
  }
}
